"""Independent high-precision evaluation of the closed-form values frozen in
the Rust unit and integration tests. Run with `python3 derived_values.py`."""
from mpmath import mp, mpf, log, e, power

mp.dps = 40


def qlog(x, a):
    x, a = mpf(x), mpf(a)
    if a == 1:
        return log(x)
    return (power(x, 1 - a) - 1) / (1 - a)


def eta(x, a):
    x, a = mpf(x), mpf(a)
    if x == 0:
        return mpf(0)
    if a == 1:
        return -x * log(x)
    return (power(x, a) - x) / (1 - a)


def binary(d, a):
    return eta(d, a) + eta(1 - mpf(d), a)


def g(d, n, a):
    return power(mpf(d), a) * qlog(n, a) + binary(d, a)


def show(name, v):
    print(f"{name:40s} {mp.nstr(v, 20)}")


show("q_log(4, 2)", qlog(4, 2))
show("eta(1/2, 2)", eta(mpf(1) / 2, 2))
show("eta(1/e, 1)", eta(1 / e, 1))
show("eta_argmax(10)", power(10, mpf(1) / (1 - 10)))
show("binary_entropy(0.3, 2)", binary(mpf("0.3"), 2))
show("binary_entropy(0.5, 1)", binary(mpf("0.5"), 1))
show("g(0.2, 3, 2)", g(mpf("0.2"), 3, 2))
show("g(0.1, 4, 3)", g(mpf("0.1"), 4, 3))
show("g(0.5, 4, 3)", g(mpf("0.5"), 4, 3))
show("eta(0.495, 1)", eta(mpf("0.495"), 1))
show("eta(0.505, 1)", eta(mpf("0.505"), 1))
show("max k=1 a=2", eta(mpf(1) / 2, 2))
show("rel cap k=5 a=1", 1 / (5 * qlog(6, 1)))
show("fannes(0.1,k=1,a=1)", mpf("0.1") * qlog(2, 1) + eta(mpf("0.1"), 1))
show("check p=(.6,.4) q=uniform a=2 lhs",
     abs(eta(mpf("0.6"), 2) + eta(mpf("0.4"), 2) - 2 * eta(mpf("0.5"), 2)))
show("check ... rhs", power(mpf("0.2"), 2) * qlog(3, 2) + eta(mpf("0.2"), 2))
show("stability(0.1,k=2,a=2)",
     (g(mpf("0.1"), 3, 2) + eta(mpf("0.1"), 2)) / qlog(2, 2))
eps = mpf("1e-4")
d1 = (-(1 - eps) * log(1 - eps) - eps * log(2)) / 2
d2 = ((1 + eps) * log(1 + eps) + (1 - eps) * log(1 - eps)) / 2
show("instability 1e-4 delta1", d1)
show("instability 1e-4 delta2", d2)
show("instability 1e-4 ratio", d1 / d2)
show("instability 1e-4 ratio*eps", d1 / d2 * eps)
eps = mpf("1e-2")
d1 = (-(1 - eps) * log(1 - eps) - eps * log(2)) / 2
d2 = ((1 + eps) * log(1 + eps) + (1 - eps) * log(1 - eps)) / 2
show("instability 1e-2 ratio*eps", d1 / d2 * eps)
show("1 - ln 2", 1 - log(2))
show("adv witness eta(1/e)-eta(1/e-0.1)", eta(1 / e, 1) - eta(1 / e - mpf("0.1"), 1))
show("2/e", 2 / e)
show("ln 2", log(2))
show("ln 3", log(3))
