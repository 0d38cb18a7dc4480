; a nullary symbol flowing into a unary one
(>= (a) 3)
(>= (f (var x)) (+ (var x) (a)))
