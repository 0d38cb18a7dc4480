; list-reversal style system as displayed in the source text (see README);
; the recursive call reads r(x, c(y, z)) rather than r(y, c(x, z))
(>= (r (n) (var y)) 1)
(>= (r (c (var x) (var y)) (var z))
    (+ 1 (r (var x) (c (var y) (var z)))))
