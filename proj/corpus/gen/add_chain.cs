; composing a successor-like function with itself
(>= (g (var x)) (+ (var x) 1))
(>= (f (var x)) (g (g (var x))))
