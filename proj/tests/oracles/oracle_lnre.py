#!/usr/bin/env python3
"""Independent oracle for the population-model and special-function values.

Integrates the defining integrals numerically with mpmath (50 digits), with
no use of the closed forms under test. Run: python3 oracle_lnre.py
"""
import mpmath as mp

mp.mp.dps = 50

def fzm_c(shape, lo, hi):
    e = 1 - shape
    return e / (hi**e - lo**e)

def quad_types(shape, lo, hi, n):
    """E[V(n)] = int (1 - exp(-n p)) c p^(-shape-1) dp."""
    c = fzm_c(shape, lo, hi)
    return mp.quad(lambda p: (1 - mp.exp(-n * p)) * c * p**(-shape - 1), [lo, hi])

def quad_class(shape, lo, hi, n, m):
    """E[V_m(n)] = int Poisson(m; n p) c p^(-shape-1) dp."""
    c = fzm_c(shape, lo, hi)
    return mp.quad(
        lambda p: (n * p)**m * mp.exp(-n * p) / mp.factorial(m) * c * p**(-shape - 1),
        [lo, hi])

def pop_types(shape, lo, hi):
    c = fzm_c(shape, lo, hi)
    return mp.quad(lambda p: c * p**(-shape - 1), [lo, hi])

def show(label, value):
    print(f"{label}: {mp.nstr(value, 17)}")

shape, lo, hi = 0.4, 1e-6, 0.01
print(f"params shape={shape} lo={lo} hi={hi}")
show("c (norm)           ", fzm_c(mp.mpf(shape), mp.mpf(lo), mp.mpf(hi)))
show("population types S ", pop_types(mp.mpf(shape), mp.mpf(lo), mp.mpf(hi)))
for n in (1e3, 1e4, 1e5):
    show(f"E[V({n:g})]        ", quad_types(mp.mpf(shape), mp.mpf(lo), mp.mpf(hi), mp.mpf(n)))
for m in (1, 2, 5):
    show(f"E[V_{m}(1e4)]       ",
         quad_class(mp.mpf(shape), mp.mpf(lo), mp.mpf(hi), mp.mpf(1e4), m))

# A second parameter point exercising shape > 0.5.
shape2, lo2, hi2 = 0.72, 1e-7, 0.05
print(f"\nparams shape={shape2} lo={lo2} hi={hi2}")
show("population types S ", pop_types(mp.mpf(shape2), mp.mpf(lo2), mp.mpf(hi2)))
show("E[V(5e4)]          ", quad_types(mp.mpf(shape2), mp.mpf(lo2), mp.mpf(hi2), mp.mpf(5e4)))
show("E[V_1(5e4)]        ", quad_class(mp.mpf(shape2), mp.mpf(lo2), mp.mpf(hi2), mp.mpf(5e4), 1))
show("E[V_3(5e4)]        ", quad_class(mp.mpf(shape2), mp.mpf(lo2), mp.mpf(hi2), mp.mpf(5e4), 3))

# ---- Regularized incomplete gamma references ----
print("\nregularized gamma Q(a,x) = Gamma(a,x)/Gamma(a)")
for a, x in [(0.6, 0.001), (0.6, 2.5), (0.28, 1e-8), (1.0, 1.0), (3.5, 0.5),
             (3.5, 12.0), (12.0, 30.0), (0.999, 0.999), (25.0, 24.0)]:
    q = mp.gammainc(a, x, mp.inf, regularized=True)
    print(f"Q({a}, {x}) = {mp.nstr(q, 17)}")

# ---- Binomial subsample identities on a fixed spectrum ----
# spectrum {1:5, 2:3, 7:2} -> tokens 25, types 10; subsample 10 (p = 0.4).
spec = {1: 5, 2: 3, 7: 2}
tokens = sum(r * n for r, n in spec.items())
p = mp.mpf(10) / tokens
print(f"\nbinomial subsample spectrum={spec} tokens={tokens} p={mp.nstr(p, 6)}")
for m in (1, 2, 3):
    v = sum(n * mp.binomial(r, m) * p**m * (1 - p)**(r - m)
            for r, n in spec.items() if r >= m)
    print(f"E[V_{m}(10)] = {mp.nstr(v, 17)}")
vt = sum(n * (1 - (1 - p)**r) for r, n in spec.items())
print(f"E[V(10)]   = {mp.nstr(vt, 17)}")

# ---- Poisson uniqueness conditional ----
print("\nu(lambda) = lambda / (e^lambda - 1)")
for lam in (1.0, 0.3, 2.7):
    print(f"u({lam}) = {mp.nstr(mp.mpf(lam) / mp.expm1(mp.mpf(lam)), 17)}")
