"""Independent brute-force oracle used to freeze expected values in the C++ tests."""
import math
import numpy as np

M = range(13)
R = [1, 2, 4, 8, 16, 32, 64, 128]
T = [1, 2, 4, 8, 32]
F = {1: 1, 2: 2, 4: 4, 8: 12, 32: 48}
P = [-0.004994, 0.2031, 0.08811, 0.834]
Q = [0.001055, 0.007623, 0.01359, 0.3615]


def tbs(m):
    return 0.65 * m * m + 7.5 * m + 15.5


def thr(m):
    return np.polyval(Q, m)


def delay(m, t, r, k0=1.0, k1=8.0, k2=96.0):
    return (k1 + k0 * r * t) * math.ceil(k2 / tbs(m))


def brute(k3):
    best = None
    for m in M:
        for t in T:
            for r in R:
                if k3 * F[t] * r >= thr(m):
                    key = (delay(m, t, r), r, t, -m)
                    if best is None or key < best[0]:
                        best = (key, (m, t, r))
    return best


if __name__ == "__main__":
    print("thr(1)", thr(1), "thr(12)", thr(12), "tbs12", tbs(12))
    for k3 in [3.445332, 0.01, 0.001, 1.0, 0.089]:
        print("brute", k3, brute(k3))
    pts = sorted(F.items())
    c = np.polyfit([p[0] for p in pts], [p[1] for p in pts], 3)
    fit = np.polyval(c, [p[0] for p in pts])
    print("fit", c, np.mean((fit - [p[1] for p in pts]) ** 2))
    print("paper fit mse", np.mean((np.polyval(P, [p[0] for p in pts]) - [p[1] for p in pts]) ** 2))
    print("roots num", np.roots([2 * P[0], P[1], 0, -P[3]]))
    print("roots den", np.roots([3 * P[0], 2 * P[1], P[2]]))
    print("f(2.142)", np.polyval(P, 2.142))
    # Hata open area
    f, hb, hm = 880.0, 30.0, 1.5
    a = (1.1 * math.log10(f) - 0.7) * hm - (1.56 * math.log10(f) - 0.8)
    lu = 69.55 + 26.16 * math.log10(f) - 13.82 * math.log10(hb) - a
    lo = lu - 4.78 * math.log10(f) ** 2 + 18.33 * math.log10(f) - 40.94
    print("hata urban 1km", lu, "open 1km", lo, "slope", 44.9 - 6.55 * math.log10(hb))
    k3db = 20 - 97.7 - (-174 + 5 + 10 * math.log10(180e3))
    print("k3 dB", k3db, 10 ** (k3db / 10))
