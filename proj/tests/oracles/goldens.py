#!/usr/bin/env python3
# Copyright 2026 The schedq Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent high-precision reference values for the C++ tests.

Writes goldens.hpp next to this file. Needs mpmath only.

  python3 tests/oracles/goldens.py
"""

import os
from mpmath import mp, mpf, mpc, gamma, sqrt, exp, log, pi, sin, quad, inf, nsum, fsum

mp.dps = 80


# p_j = (1 + j)^-2. I_0 = 1 surely; the rest has generating function
#   prod_{j>=1} (1 - p_j + p_j s) = (1/2) prod_{j>=1} (1 + s / (j (j + 2)))
#                                 = 1 / (Gamma(2 - sqrt(1 - s)) Gamma(2 + sqrt(1 - s))),
# an entire function of s. Coefficients by the trapezoidal Cauchy integral.
def pgf_rest(s):
    r = sqrt(1 - s)
    return 1 / (gamma(2 - r) * gamma(2 + r))


def coefficients(kmax, radius=mpf(8), points=512):
    vals = []
    for m in range(points):
        z = radius * exp(2j * pi * m / points)
        vals.append(pgf_rest(z))
    out = []
    for k in range(kmax + 1):
        acc = fsum(vals[m] * exp(-2j * pi * m * k / points) for m in range(points))
        out.append((acc / points / radius**k).real)
    return out


def tail_alpha2(n, coef):
    # P(Z >= n) = P(Z' >= n - 1)
    return fsum(coef[n - 1:])


def gamma_const(c, alpha):
    a = (alpha * sin(pi / alpha) / pi) ** alpha  # c r*
    g = quad(lambda x: log(1 + x**alpha / a), [0, 1]) + \
        quad(lambda x: log(1 + a * x**-alpha), [1, inf])
    return g + alpha + log(c)


def r_star(c, alpha):
    return (alpha * sin(pi / alpha) / pi) ** alpha / c


def kolmogorov_q(lam):
    return 2 * nsum(lambda k: (-1) ** (k - 1) * exp(-2 * k * k * lam * lam), [1, inf])


# Symmetric Pareto, c = 0.25 each side, alpha = 2, uniform core on [-1, 1].
def pareto_cdf(x):
    x = mpf(x)
    if x <= -1:
        return mpf('0.25') * (-x) ** -2
    if x < 1:
        return mpf('0.25') + mpf('0.25') * (x + 1)
    return 1 - mpf('0.25') * x ** -2


def laplace_cdf(x):  # d = beta / 2 = 0.5, beta = 1
    x = mpf(x)
    return mpf('0.5') * exp(x) if x < 0 else 1 - mpf('0.5') * exp(-x)


def cov(cdf, u, n):
    u = mpf(u)
    def term(i):
        a = cdf(1 - i - u) - cdf(-i - u)
        b = cdf(n - i - u) - cdf(n - 1 - i - u)
        return a * b
    # Terms are smooth in i away from the kinks; sum the middle directly.
    mid = fsum(term(i) for i in range(-4 * n - 50, 4 * n + 51))
    hi = nsum(term, [4 * n + 51, inf])
    lo = nsum(lambda k: term(-k), [4 * n + 51, inf])
    return -(mid + hi + lo)


def main():
    lines = []
    def put(name, value, note):
        lines.append(f"// {note}")
        lines.append(f"inline constexpr double {name} = {mp.nstr(value, 20, min_fixed=-1, max_fixed=-1)};")

    coef = coefficients(140)
    for n in (10, 11, 20, 21, 30, 31, 40):
        put(f"kTailAlpha2N{n}", tail_alpha2(n, coef), f"P(Z >= {n}), p_j = (1+j)^-2, Gamma-product generating function")
    for alpha in (2, 3, 4):
        put(f"kGammaC1Alpha{alpha}", gamma_const(1, alpha), f"gamma constant, c = 1, alpha = {alpha}, mpmath quad")
    put("kRStarC1Alpha4", r_star(1, 4), "r*, c = 1, alpha = 4")
    for lam in ("0.5", "1", "1.36", "2"):
        put("kKolmogorovQ" + lam.replace(".", "_"), kolmogorov_q(mpf(lam)), f"P(K > {lam})")
    for n in (10, 200):
        put(f"kCovPareto2N{n}", cov(pareto_cdf, '0.5', n), f"conditional covariance, symmetric Pareto alpha = 2, u = 0.5, n = {n}")
    for n in (20, 40):
        put(f"kCovLaplace1N{n}", cov(laplace_cdf, '0.5', n), f"conditional covariance, Laplace(1), u = 0.5, n = {n}")

    here = os.path.dirname(os.path.abspath(__file__))
    header = open(os.path.join(here, "..", "..", "include", "schedq", "error.hpp")).read().split("#ifndef")[0]
    with open(os.path.join(here, "goldens.hpp"), "w") as f:
        f.write(header)
        f.write("// Generated by goldens.py; do not edit.\n\n#ifndef SCHEDQ_TESTS_GOLDENS_HPP_\n#define SCHEDQ_TESTS_GOLDENS_HPP_\n\nnamespace goldens {\n\n")
        f.write("\n".join(lines))
        f.write("\n\n}  // namespace goldens\n\n#endif  // SCHEDQ_TESTS_GOLDENS_HPP_\n")


if __name__ == "__main__":
    main()
