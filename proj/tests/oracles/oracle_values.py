"""Independent high-precision oracle for the scalar integrals.

Every integral is split as [0, t0] + [t0, T] + [T, inf):
  * the head [0, t0] is integrated term-by-term from the binomial / log
    power series of the numerator (exact moments of t^(k-1-2s)),
  * the middle is mpmath tanh-sinh with explicit breakpoints,
  * the tail uses t = 1/u so tanh-sinh sees an algebraic endpoint.
Nothing here shares code with the C++ Gauss-Jacobi / Gauss-Kronrod rules.
The printed values are frozen into the C++ unit and acceptance tests.
"""
import mpmath as mp

mp.mp.dps = 40
T0 = mp.mpf(1) / 4
NTERMS = 120


def head_series(coeffs, p):
    # sum_k a_k t^k / t^p over [0, T0], coeffs = [(k, a_k)]
    return mp.fsum(a * T0 ** (k + 1 - p) / (k + 1 - p) for k, a in coeffs)


def tail(f, T):
    return mp.quad(lambda u: f(1 / u) / u ** 2, [0, 1 / T])


def binom(a, k):
    return mp.binomial(a, k)


def second_diff_coeffs(a):
    # (1+t)^a + (1-t)^a - 2 = 2 sum_{k>=1} C(a,2k) t^{2k}
    return [(2 * k, 2 * binom(a, 2 * k)) for k in range(1, NTERMS)]


def h(c, s):
    c = mp.mpf(c); s = mp.mpf(s)
    p = 1 + s
    head = head_series([(2 * k, -mp.mpf(1) / k) for k in range(1, NTERMS)], p)
    mid = mp.quad(lambda t: mp.log(abs(1 - t * t)) / t ** p, [T0, 1, c])
    tl = mp.quad(lambda t: mp.log(1 + t) / t ** p, [c, 4]) + tail(lambda t: mp.log(1 + t) / t ** p, 4)
    return head + mid + tl


def l(s, al):
    s = mp.mpf(s); al = mp.mpf(al)
    p = 1 + 2 * s
    head = head_series(second_diff_coeffs(al), p)
    mid = mp.quad(lambda t: ((1 + t) ** al + (1 - t) ** al - 2) / t ** p, [T0, 1])
    f = lambda t: ((1 + t) ** al - 2) / t ** p
    return head + mid + mp.quad(f, [1, 4]) + tail(f, 4)


def l_red(s, al):
    s = mp.mpf(s); al = mp.mpf(al)
    b = 2 * s - al - 1
    p = 2 * s
    head = head_series([(k, binom(al - 1, k) - binom(b, k)) for k in range(1, NTERMS)], p)
    f = lambda t: ((1 + t) ** (al - 1) - (1 + t) ** b) / t ** p
    return al / (2 * s) * (head + mp.quad(f, [T0, 1, 4]) + tail(f, 4))


def _g_like(c, s, al):
    # first integral over [0,c] (c may be inf) + 2 * second over [0, inf)
    p = 1 + 2 * s
    head1 = head_series(second_diff_coeffs(al), p)
    f1 = lambda t: (abs(1 + t) ** al + abs(1 - t) ** al - 2) / t ** p
    if c == mp.inf:
        first = head1 + mp.quad(f1, [T0, 1, 2, 4]) + tail(f1, 4)
    else:
        first = head1 + mp.quad(f1, [T0, 1, c])
    head2 = head_series([(2 * k, binom(al / 2, k)) for k in range(1, NTERMS)], p)
    f2 = lambda t: ((1 + t * t) ** (al / 2) - 1) / t ** p
    second = head2 + mp.quad(f2, [T0, 1, 4]) + tail(f2, 4)
    return first + 2 * second


def g(c, s, al):
    return _g_like(mp.mpf(c), mp.mpf(s), mp.mpf(al))


def c_s(s):
    s = mp.mpf(s)
    return 4 ** s * mp.gamma(s + 0.5) / (mp.sqrt(mp.pi) * abs(mp.gamma(-s)))


def c_eps(s, e):
    return c_s(s) * _g_like(mp.inf, mp.mpf(s), -mp.mpf(e))


def bisect(F, a, b, tol):
    a = mp.mpf(a); b = mp.mpf(b)
    fa = F(a)
    while b - a > tol:
        m = (a + b) / 2
        fm = F(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return (a + b) / 2


def show(name, v):
    print(f"{name:28s} {mp.nstr(v, 17)}")


if __name__ == "__main__":
    r2 = mp.sqrt(2)
    show("h(2,1)", h(2, 1)); show("-log2", -mp.log(2))
    show("h(2,0.5)", h(2, 0.5))
    show("h(1.5,0.5)", h(1.5, 0.5))
    show("h(1.5,0.75)", h(1.5, 0.75))
    show("h(1.44,0.6)", h(1.44, 0.6))
    show("h(2,0.9)", h(2, 0.9))
    show("h(1.44,0.8)", h(1.44, 0.8))
    show("h(2,0.999)", h(2, 0.999))
    show("s0(2)", bisect(lambda s: h(2, s), 0.5, 1.0, 1e-12))
    show("s0(1.5)", bisect(lambda s: h(1.5, s), 0.5, 1.0, 1e-12))
    show("s0(1.44)", bisect(lambda s: h(1.44, s), 0.5, 1.0, 1e-12))
    for (s, a) in [(0.7, 0.3), (0.7, 1.1), (0.8, 0.4), (0.6, 0.3), (0.9, 1.5), (0.9, 0.45)]:
        show(f"l({s},{a})", l(s, a)); show(f"l_red({s},{a})", l_red(s, a))
    show("g(r2,.95,1)", g(r2, 0.95, 1))
    show("g(r2,.95,.9)", g(r2, 0.95, 0.9))
    show("g(r2,.9,.05)", g(r2, 0.9, 0.05))
    show("g(1.2,.8,.3)", g(1.2, 0.8, 0.3))
    show("alpha*(r2,.95)", bisect(lambda a: g(r2, 0.95, a), 1e-3, 0.9, 1e-12))
    show("alpha*(r2,.99)", bisect(lambda a: g(r2, 0.99, a), 1e-3, 0.98, 1e-12))
    show("C_s(0.75)", c_s(0.75))
    show("C_s(0.99)", c_s(0.99))
    show("c(0.9,0.02)", c_eps(0.9, 0.02))
    show("c(0.9,0.05)", c_eps(0.9, 0.05))
    for s in [0.8, 0.9, 0.99]:
        show(f"epsbar({s})", bisect(lambda e: c_eps(s, e), 1e-3, 0.9, 1e-11))
