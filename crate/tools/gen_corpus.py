"""Writes the .pjc corpus with expected results from plain level arithmetic.

Run from anywhere: python3 tools/gen_corpus.py
"""
import random, os
OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "crates", "core", "tests", "corpus")
rng = random.Random(20261016)

def dcov(c):
    k, n = c
    return n if k == "delta" else n + 1
def scov(c):
    k, n = c
    return ("sigma", n + 1) if k == "pi" else ("sigma", n)
def rank(c):
    k, n = c
    return 2*n-2 if k == "delta" else 2*n-1
def leq(a, b):
    return a == b or rank(a) < rank(b)
def join(a, b):
    if leq(a, b): return b
    if leq(b, a): return a
    return ("delta", a[1] + 1)
def compl(c):
    k, n = c
    return ({"sigma": "pi", "pi": "sigma", "delta": "delta"}[k], n)
def cls(c): return f"{c[0]} {c[1]}"
def rand_class(lo=1, hi=4):
    k = rng.choice(["sigma", "pi", "delta"])
    n = rng.randint(lo, hi)
    if k == "delta" and n == 1 and rng.random() < 0.5:
        n = 2
    return (k, n)

HEADER = "space X = baire\nspace Y = reals\nspace Z = cantor\n"
programs = []

def add(name, desc, mode, body):
    programs.append((name, f"# {desc}\n# mode: {mode}\n" + HEADER + body))

for i in range(4):
    p, q = rng.randint(1, 6), rng.randint(1, 6)
    add(f"compose_{i}", "composition adds levels; a Borel inner function keeps the outer level", "zfc",
        f"func f : X -> X : delta {p}\nfunc g : X -> X : delta {q}\nfunc b : X -> X : borel\n"
        f"let fg = compose(f, g)\nlet fb = compose(f, b)\n"
        f"assert level(fg) == delta {p if q == 1 else p+q}\nassert level(fb) == delta {p}\nassert level(compose(b, b)) == delta 1\n")

for i in range(5):
    p = rng.randint(1, 5)
    s, pi_, d = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 5)
    add(f"preimage_{i}", "preimages under measurable and Borel functions", "zfc",
        f"func f : X -> Y : delta {p}\nfunc b : X -> Y : borel\n"
        f"set S in Y : sigma {s}\nset P in Y : pi {pi_}\nset D in Y : delta {d}\n"
        f"let a = preimage(f, S)\nlet c = preimage(f, P)\nlet e = preimage(f, D)\n"
        f"assert class(a) == sigma {s+p-1}\nassert class(c) == pi {pi_+p-1}\nassert class(e) == delta {d if p == 1 else p+d}\n"
        f"assert class(preimage(b, S)) == sigma {s}\nassert class(preimage(b, complement(P))) == sigma {pi_}\n")

for i in range(4):
    p = rng.randint(1, 6)
    g, dm = rand_class(), rand_class()
    add(f"graph_{i}", "graphs of measurable functions and functions recovered from graphs", "zfc",
        f"func f : X -> Y : delta {p}\nset G in X * Y : {cls(g)}\nset D in X : {cls(dm)}\n"
        f"let gf = graph(f)\nlet back = fromgraph(G, D)\n"
        f"assert class(gf) == delta {p+1}\nassert level(back) == delta {max(dcov(g), dcov(dm)) + 1}\n")

for i in range(3):
    p = rng.randint(1, 6)
    add(f"slice_{i}", "sections of functions and sets on a product", "zfc",
        f"func h : X * Y -> xreal : delta {p}\nset S in X * Y : sigma {p}\n"
        f"let hs = slice[X=a](h)\nlet ss = section[X=a](S)\n"
        f"assert level(hs) == delta {p+1}\nassert class(ss) == sigma {p}\n")

for i in range(5):
    p = rng.randint(1, 6)
    dm = rand_class()
    q = max(p, dcov(dm)) + 1
    add(f"partial_{i}", "partial infimum and supremum over a sectioned domain", "zfc",
        f"func h : X * Y -> xreal : delta {p}\nset D in X * Y : {cls(dm)}\n"
        f"let lo = pinf(h, D)\nlet hi = psup(h, D)\n"
        f"assert level(lo) == delta {q}\nassert level(hi) == delta {q}\n"
        f"assert class(sublevel(lo, <, 1/2)) == delta {q}\n")

for i in range(4):
    p, r = rng.randint(1, 6), rng.randint(1, 6)
    add(f"integral_pd_{i}", "kernel integration under PD", "pd",
        f"func h : X * Y -> xreal : delta {p}\nkernel q : X -> Y : delta {r}\n"
        f"let lam = integral(h, q)\nassert level(lam) == delta {p+r+2}\n")
    add(f"integral_zfc_{i}", "kernel integration is refused without PD", "zfc",
        f"func h : X * Y -> xreal : delta {p}\nkernel q : X -> Y : delta {r}\n"
        f"let lam = integral(h, q)\nassert blocked(lam) by F-INT\n")

for i in range(6):
    a, b = rand_class(), rand_class()
    pr = join(a, b)
    add(f"setops_{i}", "products, projections, complements and finite unions", "zfc",
        f"set A in X : {cls(a)}\nset B in Y : {cls(b)}\nset C in X : {cls(b)}\n"
        f"let ab = prod(A, B)\nlet pa = proj[X](ab)\n"
        f"assert class(ab) == {cls(pr)}\nassert class(pa) == {cls(scov(pr))}\n"
        f"assert class(complement(A)) == {cls(compl(a))}\n"
        f"assert class(union(A, C)) == {cls(join(a, b))}\nassert class(inter(A, C, A)) == {cls(join(a, b))}\n"
        f"assert class(complement(complement(A))) == {cls(a)}\n")

for i in range(3):
    c = rand_class()
    add(f"borel_image_{i}", "Borel images land in the sigma class", "zfc",
        f"func b : X -> Y : borel\nset A in X : {cls(c)}\n"
        f"assert class(image[b](A)) == {cls(scov(c))}\n")

for i in range(4):
    c = rand_class(1, 3)
    gated = scov(c)[1] >= 2
    body = f"set A in X : {cls(c)}\nlet t = threshold(A, 1/3)\n"
    if gated:
        add(f"threshold_zfc_{i}", "measure thresholds of projective sets need PD", "zfc",
            body + "assert blocked(t) by S-WR\n")
        add(f"threshold_pd_{i}", "measure thresholds of projective sets", "pd",
            body + f"assert class(t) == {cls(scov(c))}\n")
    else:
        add(f"threshold_{i}", "measure thresholds of analytic sets in ZFC", "zfc",
            body + f"assert class(t) == {cls(scov(c))}\n")

def select_level(c):
    m = 0
    while not leq(c, ("pi", 2*m+1)):
        m += 1
    return m, max(2*m+2, dcov(scov(c))) + 1

for i, c in enumerate([("pi", 1), ("sigma", 1), ("delta", 1), ("delta", 2), ("sigma", 2), ("pi", 3), ("sigma", 3)]):
    m, lvl = select_level(c)
    body = f"set A in X * Y : {cls(c)}\nlet s = select(A)\n"
    if m == 0:
        add(f"select_{i}", "uniformizing selectors of coanalytic sets in ZFC", "zfc",
            body + f"assert level(s) == delta {lvl}\n")
    else:
        add(f"select_pd_{i}", "uniformizing selectors of projective sets under PD", "pd",
            body + f"assert level(s) == delta {lvl}\n")
        add(f"select_zfc_{i}", "uniformizing selectors beyond coanalytic sets need PD", "zfc",
            body + "assert blocked(s) by F-SELECT\n")

for i in range(4):
    p, q = rng.randint(1, 6), rng.randint(1, 6)
    add(f"arith_{i}", "arithmetic, pairing and cylinders keep the larger level", "zfc",
        f"func f : X -> xreal : delta {p}\nfunc g : X -> xreal : delta {q}\nfunc k : X -> Z : delta {q}\n"
        f"assert level(sum(f, g)) == delta {max(p,q)}\nassert level(mul(f, g)) == delta {max(p,q)}\n"
        f"assert level(min(f, neg(g))) == delta {max(p,q)}\nassert level(max(f, g)) == delta {max(p,q)}\n"
        f"assert level(pair(f, k)) == delta {max(p,q)}\nassert level(cyl(f, Y)) == delta {p}\n"
        f"assert class(sublevel(sum(f, g), >=, -2)) == delta {max(p,q)}\n")

for i in range(4):
    cs = [rand_class(1, 5) for _ in range(3)]
    j = cs[0]
    for c in cs[1:]:
        j = join(j, c)
    lst = ", ".join(cls(c) for c in cs)
    b = rand_class(1, 5)
    add(f"countable_{i}", "countable unions and intersections with bounded level schedules", "zfc",
        f"let u = union i in nat of A_i in X with levels list [{lst}]\n"
        f"let v = inter i in nat of B_i in X with levels bounded {cls(b)}\n"
        f"let w = sup i in nat of f_i on X with levels const {cls(b)}\n"
        f"assert class(u) == {cls(j)}\nassert class(v) == {cls(b)}\nassert level(w) == delta {dcov(b)}\n")

for i in range(3):
    c = rand_class(2, 5)
    add(f"um_pd_{i}", "universal measurability of projective sets and functions under PD", "pd",
        f"set A in X : {cls(c)}\nfunc f : X -> xreal : delta {rng.randint(2,6)}\n"
        f"assert um(A)\nassert um(f)\nassert um(complement(A))\n")
add("um_zfc", "universal measurability of analytic and coanalytic sets in ZFC", "zfc",
    "set A in X : sigma 1\nset B in X : pi 1\nfunc b : X -> xreal : borel\nassert um(A)\nassert um(B)\nassert um(b)\n")

for i, (p, dm) in enumerate([(2, ("delta", 2)), (1, ("delta", 1)), (2, ("pi", 1))]):
    q = max(p, dcov(dm)) + 1
    m = 0
    while not leq(("delta", q), ("pi", 2*m+1)):
        m += 1
    lvl = max(2*m+2, dcov(("sigma", q))) + 1
    body = f"set D in X * Y : {cls(dm)}\nfunc h : X * Y -> xreal : delta {p}\n"
    add(f"epsselect_pd_{i}", "epsilon-optimal selectors under PD", "pd",
        body + f"let lo = epsselect(D, h, 1/10, inf)\nlet hi = epsselect(D, h, 1/4, sup)\n"
        f"assert level(lo) == delta {lvl}\nassert level(hi) == delta {lvl}\n")
    add(f"epsselect_zfc_{i}", "epsilon-optimal selectors need PD", "zfc",
        body + "let lo = epsselect(D, h, 1/10, inf)\nassert blocked(lo) by F-EPS\n")

for i in range(3):
    p, dm = rng.randint(1, 5), rand_class()
    add(f"domain_{i}", "functions declared on a projective domain", "zfc",
        f"set D in X : {cls(dm)}\nfunc e : X -> xreal : delta {p} on D\n"
        f"assert level(e) == delta {max(p, dcov(dm))}\n")

for i in range(2):
    p = rng.randint(1, 5)
    add(f"power_{i}", "powers of nonnegative functions", "zfc",
        f"func f : X -> xreal : delta {p} nonneg\nfunc g : X -> xreal : delta {p+1} nonneg\n"
        f"assert level(pow(f, 1/2)) == delta {p}\nassert level(pow(max(f, g), 3)) == delta {p+1}\n"
        f"assert level(inner(pair(f, g), pair(g, f))) == delta {p+1}\n")

add("lsa_usa", "semianalytic functions sit at level two", "zfc",
    "func l : X -> xreal : lsa\nfunc u : X -> xreal : usa\nfunc b : X -> xreal : borel\n"
    "assert level(l) == delta 2\nassert level(u) == delta 2\nassert level(sum(l, b)) == delta 2\n"
    "assert class(sublevel(l, <, 0)) <= sigma 2\n")

os.makedirs(OUT, exist_ok=True)
for f in os.listdir(OUT):
    os.remove(os.path.join(OUT, f))
for name, text in programs:
    with open(os.path.join(OUT, name + ".pjc"), "w") as fh:
        fh.write(text)
print(len(programs))
