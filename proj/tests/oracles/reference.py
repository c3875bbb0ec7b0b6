"""Independent reference values for the frozen constants in the unit tests.

Plain mpmath at 60 digits, written from the closed forms without reusing
any of the C++ code. Run: python3 tests/oracles/reference.py
"""

from mpmath import mp, mpf, log, exp, sqrt, pi, asinh, sinh, cos, findroot

mp.dps = 60


def elements(kind, count):
    a = [3]
    for i in range(1, count + 1):
        if kind == "spiked" and i % 2 == 0:
            a.append(4 ** (i // 2))
        else:
            a.append(3)
    return a


def convergents(a):
    p, q = [0, 1], [1, 0]
    for x in a:
        p.append(x * p[-1] + p[-2])
        q.append(x * q[-1] + q[-2])
    return p[2:], q[2:]


def theta(a):
    p, q = convergents(a)
    return mpf(p[-1]) / q[-1]


def flat_sq(th, q, p, t):
    return ((q + th * p) ** 2 * exp(-t) + exp(t) * (p - th * q) ** 2) / (1 + th ** 2)


def min_time(th, q, p):
    return log((p * th + q) / abs(q * th - p))


def show(name, x):
    print(f"{name:32s} {mp.nstr(x, 15)}")


const = elements("const", 80)
spiked = elements("spiked", 60)
th1, th2 = theta(const), theta(spiked)
P1, Q1 = convergents(const)
P2, Q2 = convergents(spiked)
s = mpf(1) / 2

print("convergent 3 of [3;3,...]     ", f"{P1[3]}/{Q1[3]}")
show("theta1", th1)
show("gap_1 |3 theta - 10|", abs(Q1[1] * th1 - P1[1]))
show("T_1(theta1)", min_time(th1, Q1[1], P1[1]))
show("T_0(theta1)", min_time(th1, Q1[0], P1[0]))
show("3 log theta1", 3 * log(th1))
show("min length^2 at T_1", flat_sq(th1, Q1[1], P1[1], min_time(th1, Q1[1], P1[1])))
show("2/sqrt(13)", 2 / sqrt(13))
show("root x e^{x/2} = 2", findroot(lambda x: x * exp(x / 2) - 2, 1))
show("root l = 0.02 e^{-l/2}", findroot(lambda l: l - 2 * mpf("0.01") * exp(-l / 2), mpf("0.01")))

t1 = min_time(th1, Q1[1], P1[1])
cross = s * abs(Q1[1] * th1 - P1[1]) / sqrt(1 + th1 ** 2)
area = 1 - cross
f = flat_sq(th1, Q1[1], P1[1], t1)
show("cylinder area at T_1", area)
show("cylinder modulus at T_1", area / f)
show("ext lower at T_1", f / (1 + (pi + 2) * s ** 2 * exp(-t1)))
show("ext upper at T_1", f / area)
show("collar width at 0.1", asinh(1 / sinh(mpf("0.05"))))
mod = (log(4 * mpf("0.3") / s ** 2) + 10 + 1) / 2
show("modulus bound t=10 R^2=0.3", mod)
u = log(10) / (2 * mod)
show("crossing arc bound", log((1 + cos(u)) / (1 - cos(u))))

show("theta2", th2)
show("even time k=1 (T_1 theta2)", min_time(th2, Q2[1], P2[1]))
show("odd time k=1", log((1 + th2 ** 2) * Q2[2] ** 2))
show("even time k=2 (T_3 theta2)", min_time(th2, Q2[3], P2[3]))
show("odd time k=2", log((1 + th2 ** 2) * Q2[4] ** 2))
