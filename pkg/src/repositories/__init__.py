"""Repositories for instance and report documents."""
