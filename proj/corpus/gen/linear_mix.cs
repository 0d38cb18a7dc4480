; forces distinct coefficients on the two arguments
(>= (f (var x) (var y)) (+ (* 2 (var x)) (* 3 (var y)) 1))
