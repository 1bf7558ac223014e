"""pfister-descent: certified algebra over characteristic-2 function fields."""
