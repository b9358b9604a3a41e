"""Reference values frozen into the unit tests.

Integrals use mpmath tanh-sinh quadrature at 30 digits, independent of the
Gauss rules in the library. Run: python3 tools/oracles/triangle_integrals.py
"""
import mpmath as mp

mp.mp.dps = 30
pi = mp.pi


def u11(x, y):
    return mp.sin(pi * x) * mp.sin(pi * y)


def hats(verts):
    (x0, y0), (x1, y1), (x2, y2) = verts
    twice = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    l0 = lambda x, y: ((x1 - x) * (y2 - y) - (x2 - x) * (y1 - y)) / twice
    l1 = lambda x, y: ((x2 - x) * (y0 - y) - (x0 - x) * (y2 - y)) / twice
    return [l0, l1, lambda x, y: 1 - l0(x, y) - l1(x, y)]


def tri_integral(f, verts):
    (x0, y0), (x1, y1), (x2, y2) = [(mp.mpf(a), mp.mpf(b)) for a, b in verts]
    jac = abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))

    def g(s, t):
        return f(x0 + s * (x1 - x0) + t * (x2 - x0), y0 + s * (y1 - y0) + t * (y2 - y0)) * jac

    return mp.quad(lambda s: mp.quad(lambda t: g(s, t), [0, 1 - s]), [0, 1])


if __name__ == "__main__":
    q = mp.mpf(1) / 4
    tri = [(q, 0), (2 * q, 0), (2 * q, q)]
    print("triangle (1/4,0) (1/2,0) (1/2,1/4)")
    for k, lam in enumerate(hats(tri)):
        print(f"  int u11 * lambda_{k} = {mp.nstr(tri_integral(lambda x, y: u11(x, y) * lam(x, y), tri), 20)}")

    # n = 2 union-jack mesh: eight triangles of area 1/8 share the centre vertex.
    h = mp.mpf(1) / 2
    c = (h, h)
    fan = [[(0, 0), (h, 0), c], [(0, 0), c, (0, h)], [(h, 0), (1, 0), c], [(1, 0), (1, h), c],
           [(0, h), c, (0, 1)], [c, (h, 1), (0, 1)], [c, (1, h), (1, 1)], [c, (1, 1), (h, 1)]]
    proj = mp.mpf(0)
    for t in fan:
        lam = hats(t)[t.index(c)]
        proj += tri_integral(lambda x, y: u11(x, y) * lam(x, y), t)
    mass, stiff, lam1 = mp.mpf(1) / 6, 4, 2 * pi**2
    delta = mp.sqrt(1 - proj**2 / (mp.mpf(1) / 4 * mass))
    Delta = mp.sqrt(1 - (lam1 * proj) ** 2 / (lam1 / 4 * stiff))
    print("n=2 centre hat: (u, phi) =", mp.nstr(proj, 20))
    print("  delta =", mp.nstr(delta, 20))
    print("  Delta =", mp.nstr(Delta, 20))

    # v = x(1-x)y(1-y): (v, u_ij) = c_i c_j with c_i = 4/(i pi)^3 for odd i.
    print("||v||^2 = 1/900, ||grad v||^2 = 1/45")
