; list length against a cons/nil skeleton
(>= (len (nil)) 0)
(>= (len (cons (var x) (var xs))) (+ 1 (len (var xs))))
(>= (cons (var x) (var xs)) (var xs))
