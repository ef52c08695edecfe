"""Independent evaluation of the frozen expected values used by the C++ tests.

Plain float64 math plus mpmath quadrature; shares no code with the library.
Run: python3 tests/oracles/derive_values.py
"""
import math

import mpmath as mp


def sigmoid(x):
    return 1.0 / (1.0 + math.exp(-x))


print("tanh: 0.6*tanh(atanh(0.5)) =", repr(0.6 * math.tanh(math.atanh(0.5))))
print("sigmoid(10)-sigmoid(-10) =", repr(sigmoid(10) - sigmoid(-10)))
print("0.1*tanh(-20) =", repr(0.1 * math.tanh(-20)))
print("kbm rhs theta dot (10/2.9)*tan(0.6) =", repr(10 / 2.9 * math.tan(0.6)))

# semi-implicit Euler step, z=(0,0,0,10), u=(0,0.6), dt=0.5, L=2.9
v = 10 + 0 * 0.5
th = 0 + v / 2.9 * math.tan(0.6) * 0.5
x = v * math.cos(th) * 0.5
y = v * math.sin(th) * 0.5
print("euler kbm step =", repr((x, y, th, v)))

# exact constant-turn arc after dt=0.5
R = 2.9 / math.tan(0.6)
w = 10 * math.tan(0.6) / 2.9
print("exact arc =", repr((R * math.sin(w * 0.5), R * (1 - math.cos(w * 0.5)), w * 0.5)))

# single lift step with delta=0.3 from v0=10
d = 0.6 * math.tanh(math.atanh(0.5))
th = 10 / 2.9 * math.tan(d) * 0.5
print("lift C_f=1 delta=0.3 =", repr((10 * math.cos(th) * 0.5, 10 * math.sin(th) * 0.5)))

# CCPP Euler substep
k = 0.1
print("ccpp euler substep =", repr((math.cos(0.1), math.sin(0.1), 0.1, 0.1)))

# clothoid from rest, sharpness 0.1, length 1: theta(s)=0.05 s^2
mp.mp.dps = 30
cx = float(mp.quad(lambda s: mp.cos(mp.mpf("0.05") * s * s), [0, 1]))
cy = float(mp.quad(lambda s: mp.sin(mp.mpf("0.05") * s * s), [0, 1]))
print("clothoid (x,y,theta,kappa) =", repr((cx, cy, 0.05, 0.1)))

# dy1/dsigma0 at zero actions, v0=10, Euler
print("dy1/dsigma0 =", repr(10 * 0.5 * (10 / 2.9) * 0.5 * 0.6))

# saturation under constant max sharpness: xi large -> sigma ~ 0.1*tanh(xi)
# v0=10, zero throttle/brake, dt=0.5, n_int=5 -> delta_s=1 per substep, kappa += ~0.1
s_m = 0.1 * math.tanh(20.0)
kap = 0.0
count = 0
while kap < 0.4:
    kap = min(kap + s_m * 1.0, 0.4)
    count += 1
print("substeps to saturation =", count)
