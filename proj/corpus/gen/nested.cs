; composition across three symbols
(>= (g (var x)) (+ (var x) 1))
(>= (f (var x)) (* 2 (var x)))
(>= (h (var x)) (f (g (var x))))
