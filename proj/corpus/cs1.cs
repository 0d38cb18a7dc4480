; list-reversal style system (corrected variant; see README)
(>= (r (n) (var y)) 1)
(>= (r (c (var x) (var y)) (var z))
    (+ 1 (r (var y) (c (var x) (var z)))))
