; one symbol defined through another
(>= (f (var x)) (g (var x)))
(>= (g (var x)) (var x))
