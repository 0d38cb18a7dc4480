; semantically valid under the pointwise interpretation x -> x, y -> y,
; but rejected by branchwise max elimination: neither 2x nor 2y alone
; dominates x + y, so the method reports OPEN at every degree.
(>= (max (* 2 (var x)) (* 2 (var y))) (+ (var x) (var y)))
