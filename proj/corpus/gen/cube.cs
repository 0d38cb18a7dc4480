; needs a cubic interpretation
(>= (f (var x)) (* (var x) (* (var x) (var x))))
