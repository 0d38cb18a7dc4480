; unsatisfiable over the naturals: at x = y = 1 the left side is 1
; while the right side is 2, so every strategy reports OPEN
(>= (max (var x) (var y)) (+ (var x) (var y)))
