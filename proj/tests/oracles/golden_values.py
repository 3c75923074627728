#!/usr/bin/env python3
# Copyright 2026 The dpsbm Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent high-precision oracle for the golden values frozen in the C++
tests. Uses mpmath quadrature for the Gaussian privacy curve (no erf) and
50-digit arithmetic for the closed-form bounds. Re-run to regenerate."""

import mpmath as mp

mp.mp.dps = 50


def gauss_delta_quad(eps, sigma, steps):
    # Privacy curve of N(1, s^2) vs N(0, s^2) with s = sigma / sqrt(steps):
    # integral of max(0, p(x) - e^eps q(x)).
    s = mp.mpf(sigma) / mp.sqrt(steps)
    eps = mp.mpf(eps)
    p = lambda x: mp.npdf(x, 1, s)
    q = lambda x: mp.npdf(x, 0, s)
    lo = s * s * eps + mp.mpf(1) / 2
    return mp.quad(lambda x: p(x) - mp.exp(eps) * q(x), [lo, lo + 5 * s, lo + 50 * s, mp.inf])


def sigma_for_budget(eps, delta, steps):
    f = lambda sg: gauss_delta_quad(eps, sg, steps) - delta
    lo, hi = mp.mpf('1e-3'), mp.mpf(1e3)
    for _ in range(200):
        mid = mp.sqrt(lo * hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def mu(eps):
    return 1 / (mp.e ** mp.mpf(eps) + 1)


def rr_distance(n, p, q, eps, eta):
    n, p, q, eta = map(mp.mpf, (n, p, q, eta))
    m = mu(eps)
    lg = mp.log(2 / eta)
    return 4 * mp.sqrt(2) / (n * (p - q)) * (q * n + mp.sqrt(8 * m * (1 - m) * n * lg) + 4 / (3 * mp.sqrt(n)) * lg)


def rr_margin(n, p, q, eps, eta, cl=1, crr=1):
    n, p, q, eta = map(mp.mpf, (n, p, q, eta))
    m = mu(eps)
    C = 4 * max(2 * cl, crr)
    lg = mp.log(n / eta)
    T = mp.sqrt(n * p * lg) + lg
    return n * (p - q) - C * (T + n / mp.sqrt(2) * mp.sqrt(m * (1 - m)) * mp.sqrt(lg))


def subsample_distance(n, p, q, qs, E, Einter, eta, use_upper=False):
    n, p, q, qs, E, Einter, eta = map(mp.mpf, (n, p, q, qs, E, Einter, eta))
    d = 2 * qs / mp.sqrt(n) * mp.sqrt(q / (p + q) * E)
    if use_upper:
        var = 4 / n * q / (p + q) * E
    else:
        var = 16 / n * qs * (1 - qs) * Einter
    L = 4 / mp.sqrt(n)
    lg = mp.log(2 / eta)
    return 4 * mp.sqrt(2) / (n * (p - q)) * (d + mp.sqrt(2 * var * lg) + L / 3 * lg)


def npi_distance(n, p, q, sigma, N, eta, c1=1):
    n, p, q, sigma, eta = map(mp.mpf, (n, p, q, sigma, eta))
    den = (p - q) * n / 3 - 2 * c1 * mp.sqrt(mp.log(n))
    return mp.sqrt(2) * sigma * (1 + 1 / n) * (mp.sqrt(n) + mp.sqrt(2 * mp.log(2 * N / eta))) / den


def converse(beta, eta, eps, p, q, alt=False):
    beta, eta, eps, p, q = map(mp.mpf, (beta, eta, eps, p, q))
    D = mp.e ** (2 * eps) + (1 - mp.e ** (2 * eps)) * (p * p + q * q) - 1
    A = mp.log(1 / (8 * mp.e ** beta)) if alt else mp.log(1 / (8 * mp.e * beta))
    B = mp.log(1 / eta)
    a = 8 * beta * (1 - 8 * beta) * D
    return (beta * A + mp.sqrt(beta**2 * A**2 + 8 * beta * (1 - 8 * beta) * D * B)) / a


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    show("sigma_basic(1,1e-6,8)", mp.sqrt(32 * mp.log(mp.mpf(10)**6)))
    show("delta(eps=1,sigma=1,N=1) quad", gauss_delta_quad(1, 1, 1))
    show("delta(eps=1,sigma=1,N=1) closed",
         mp.ncdf(-0.5) - mp.e * mp.ncdf(-1.5))
    show("sigma_for_budget(1,1/200^2,8)", sigma_for_budget(1, mp.mpf(1) / 40000, 8))
    s400 = sigma_for_budget(1, mp.mpf(1) / 160000, 8)
    show("sigma_for_budget(1,1/400^2,8)", s400)
    show("rr_distance(200,.2,.02,1,.01)", rr_distance(200, '0.2', '0.02', 1, '0.01'))
    show("rr_overlap_floor", 1 - rr_distance(200, '0.2', '0.02', 1, '0.01') / 8)
    show("rr_margin(200,.2,.02,1,.01)", rr_margin(200, '0.2', '0.02', 1, '0.01'))
    qs = 1 / (32 * mp.log(400))
    show("qs(400,eps=1)", qs)
    show("subsample_distance(400,.25,.0025,qs,10050,100,.01)",
         subsample_distance(400, '0.25', '0.0025', qs, 10050, 100, '0.01'))
    show("subsample_distance upper-variance",
         subsample_distance(400, '0.25', '0.0025', qs, 10050, 100, '0.01', True))
    show("npi_distance(400,.2,.02,s400,8,.01)", npi_distance(400, '0.2', '0.02', s400, 8, '0.01'))
    n = mp.mpf(200)
    show("gap lambda1 lb", mp.mpf('6.75') / 3 * mp.log(n))
    show("gap |lambda_i| ub", 2 * mp.sqrt(mp.log(n)))
    show("gap success prob", 1 - 2 * n ** (-1 / (2 * (mp.mpf('7.5') + mp.mpf('0.75') + 1))) - n ** -3)
    for e in [0.5, 1, 2, 4]:
        show(f"converse(.05,.01,{e},.25,.0025)", converse('0.05', '0.01', e, '0.25', '0.0025'))
    show("converse alt-A (.05,.01,1,.25,.0025)", converse('0.05', '0.01', 1, '0.25', '0.0025', True))
