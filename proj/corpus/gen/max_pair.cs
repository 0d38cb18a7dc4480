; an upper bound on both arguments and a positive floor
(>= (f (var x) (var y)) (max (var x) (var y)))
(>= (f (var x) (var y)) 1)
