; needs a quadratic interpretation; linear templates fail
(>= (f (var x)) (* (var x) (var x)))
