; a pairing symbol bounding both projections
(>= (p (var x) (var y)) (var x))
(>= (p (var x) (var y)) (var y))
