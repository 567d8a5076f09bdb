use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;

use projcalc::derivation::{check, deserialize, serialize, Judgment};
use projcalc::expr::{self, Environment, Expr};
use projcalc::finite_model::{
    eval_set, integral_minus, integral_plus, xreal_add, xreal_prod, xreal_sum, FiniteModel, MSpace, Point,
    Subset, XReal,
};
use projcalc::games::{self, FiniteGame, Player};
use projcalc::infer::{run_program, AxiomMode, Engine};
use projcalc::pointclass::{Kind, PointClass};

fn class() -> impl Strategy<Value = PointClass> {
    (prop_oneof![Just(Kind::Sigma), Just(Kind::Pi), Just(Kind::Delta)], 1u64..=8)
        .prop_map(|(k, n)| PointClass::new(k, n).unwrap())
}

fn xreal() -> impl Strategy<Value = XReal> {
    prop_oneof![
        1 => Just(XReal::NegInf),
        1 => Just(XReal::PosInf),
        6 => (-6i64..=6, 1i64..=4).prop_map(|(n, d)| XReal::ratio(n, d)),
    ]
}

proptest! {
    #[test]
    fn order_is_a_partial_order(a in class(), b in class(), c in class()) {
        prop_assert!(a.leq(a));
        if a.leq(b) && b.leq(a) { prop_assert_eq!(a, b); }
        if a.leq(b) && b.leq(c) { prop_assert!(a.leq(c)); }
    }

    #[test]
    fn join_and_meet_are_bounds(a in class(), b in class(), c in class()) {
        let j = a.join(b).unwrap();
        let m = a.meet(b);
        prop_assert!(a.leq(j) && b.leq(j));
        prop_assert!(m.leq(a) && m.leq(b));
        if a.leq(c) && b.leq(c) { prop_assert!(j.leq(c)); }
        if c.leq(a) && c.leq(b) { prop_assert!(c.leq(m)); }
        prop_assert_eq!(j, b.join(a).unwrap());
        prop_assert_eq!(m, b.meet(a));
        prop_assert_eq!(a.join(a.meet(b)).unwrap(), a);
    }

    #[test]
    fn complement_is_an_order_automorphism(a in class(), b in class()) {
        prop_assert_eq!(a.complement().complement(), a);
        prop_assert_eq!(a.leq(b), a.complement().leq(b.complement()));
        prop_assert!(a.leq(a.delta_cover().unwrap()));
        prop_assert!(a.leq(a.sigma_cover().unwrap()));
    }

    #[test]
    fn class_text_round_trips(a in class()) {
        prop_assert_eq!(a.to_string().parse::<PointClass>().unwrap(), a);
    }
}

/// Small random programs over declared sets, functions and a kernel.
fn set_expr(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![Just("A".to_string()), Just("B".to_string())];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = set_expr(depth - 1);
    prop_oneof![
        leaf,
        sub.clone().prop_map(|s| format!("complement({s})")),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("union({a}, {b})")),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("inter({a}, {b})")),
        sub.clone().prop_map(|s| format!("image[b](preimage(b, {s}))")),
        sub.clone().prop_map(|s| format!("proj[X](prod({s}, U))")),
        func_expr(depth - 1).prop_map(|f| format!("sublevel({f}, <, 1/2)")),
        func_expr(depth - 1).prop_map(|f| format!("preimage(f, sublevel({f}, >=, 0))")),
    ]
    .boxed()
}

fn func_expr(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![Just("g".to_string()), Just("e".to_string())];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = func_expr(depth - 1);
    prop_oneof![
        leaf,
        (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("sum({a}, {b})")),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("max({a}, neg({b}))")),
        sub.clone().prop_map(|a| format!("compose({a}, f)")),
        sub.clone().prop_map(|a| format!("pinf(cyl({a}, Y), prod(A, U))")),
        set_expr(depth - 1).prop_map(|s| format!("pinf(h, prod({s}, U))")),
        Just("integral(h, q)".to_string()),
    ]
    .boxed()
}

fn program(a: PointClass, b: PointClass, levels: [u32; 4], body: &str) -> String {
    format!(
        "space X = baire\nspace Y = reals\nset A in X : {a}\nset B in X : {b}\nset U in Y : borel\n\
         func f : X -> X : delta {}\nfunc g : X -> xreal : delta {}\nfunc e : X -> xreal : delta {}\n\
         func b : X -> X : borel\nfunc h : X * Y -> xreal : delta {}\nkernel q : X -> Y : delta 1\n\
         let t = {body}\n",
        levels[0], levels[1], levels[2], levels[3]
    )
}

fn result(text: &str, mode: AxiomMode) -> Option<Judgment> {
    let p = expr::parse(text).unwrap();
    let env = Environment::from_program(&p).unwrap();
    let (_, e) = p.lets().next().unwrap();
    Engine::new(&env, mode).certify(e).ok().map(|c| c.conclusion)
}

fn judgment_leq(a: &Judgment, b: &Judgment) -> bool {
    match (a, b) {
        (Judgment::Class(x), Judgment::Class(y)) => x.leq(*y),
        (Judgment::Level(x), Judgment::Level(y)) => x <= y,
        _ => false,
    }
}

fn body() -> impl Strategy<Value = String> {
    prop_oneof![set_expr(3), func_expr(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn programs_round_trip(a in class(), b in class(), levels in [1u32..5, 1..5, 1..5, 1..5], body in body()) {
        let text = program(a, b, levels, &body);
        let p = expr::parse(&text).unwrap();
        let printed = expr::format(&p);
        prop_assert_eq!(&expr::parse(&printed).unwrap(), &p);
        prop_assert_eq!(expr::format(&expr::parse(&printed).unwrap()), printed);
    }

    #[test]
    fn derivations_check(a in class(), b in class(), levels in [1u32..5, 1..5, 1..5, 1..5], body in body()) {
        let text = program(a, b, levels, &body);
        let p = expr::parse(&text).unwrap();
        let env = Environment::from_program(&p).unwrap();
        let report = run_program(&p, AxiomMode::ZfcPd).unwrap();
        for (_, d) in report.derivations() {
            prop_assert!(check(d, &env).is_ok(), "{}", text);
            prop_assert_eq!(&deserialize(&serialize(d)).unwrap(), d);
        }
    }

    #[test]
    fn pd_never_loses_a_result(a in class(), b in class(), levels in [1u32..5, 1..5, 1..5, 1..5], body in body()) {
        let text = program(a, b, levels, &body);
        if let Some(zfc) = result(&text, AxiomMode::Zfc) {
            let pd = result(&text, AxiomMode::ZfcPd).expect("PD result");
            prop_assert!(judgment_leq(&pd, &zfc), "{}: {:?} vs {:?}", text, pd, zfc);
        }
    }

    /// Weakening a declaration never sharpens a conclusion. The generator only
    /// puts sublevel sets (always Δ) under non-Borel preimages: the Δ preimage
    /// rule is not monotone against the Σ/Π one.
    #[test]
    fn weaker_declarations_give_weaker_results(
        a in class(), b in class(), up in class(),
        levels in [1u32..5, 1..5, 1..5, 1..5], bump in [0u32..2, 0..2, 0..2, 0..2],
        body in body(),
    ) {
        let weaker_a = a.join(up).unwrap();
        let raised = [levels[0] + bump[0], levels[1] + bump[1], levels[2] + bump[2], levels[3] + bump[3]];
        let strong = result(&program(a, b, levels, &body), AxiomMode::ZfcPd);
        let weak = result(&program(weaker_a, b, raised, &body), AxiomMode::ZfcPd);
        if let (Some(s), Some(w)) = (strong, weak) {
            prop_assert!(judgment_leq(&s, &w), "{}: {:?} vs {:?}", body, s, w);
        }
    }

    #[test]
    fn xreal_sums_and_products_commute(a in xreal(), b in xreal(), c in xreal()) {
        prop_assert_eq!(xreal_add(&a, &b), xreal_add(&b, &a));
        prop_assert_eq!(xreal_prod(&a, &b), xreal_prod(&b, &a));
        prop_assert_eq!(xreal_add(&xreal_add(&a, &b), &c), xreal_add(&a, &xreal_add(&b, &c)));
        prop_assert_eq!(xreal_sum(&[a.clone(), b.clone(), c.clone()]), xreal_sum(&[c, b, a]));
    }

    #[test]
    fn integrals_are_monotone(
        pairs in prop::collection::vec((xreal(), xreal()), 1..6),
        raw in prop::collection::vec(1u32..5, 6),
    ) {
        let n = pairs.len();
        let total: u32 = raw[..n].iter().sum();
        let p: Vec<BigRational> = raw[..n].iter().map(|w| BigRational::new((*w).into(), total.into())).collect();
        let f: Vec<XReal> = pairs.iter().map(|(x, y)| x.clone().min(y.clone())).collect();
        let g: Vec<XReal> = pairs.iter().map(|(x, y)| x.clone().max(y.clone())).collect();
        prop_assert!(integral_minus(&f, &p) <= integral_minus(&g, &p));
        prop_assert!(integral_plus(&f, &p) <= integral_plus(&g, &p));
        prop_assert!(integral_minus(&f, &p) <= integral_plus(&f, &p));
    }

    #[test]
    fn finite_sets_obey_de_morgan(n in 1usize..7, a in any::<u8>(), b in any::<u8>()) {
        let atoms: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let pick = |mask: u8| Subset {
            space: MSpace::atoms("X"),
            elems: atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| Point::atom(x)).collect::<BTreeSet<_>>(),
        };
        let mut m = FiniteModel::new();
        m.spaces.insert("X".into(), atoms.clone());
        m.sets.insert("A".into(), pick(a));
        m.sets.insert("B".into(), pick(b));
        let parse = |s: &str| {
            let text = format!("space X = baire\nset A in X : borel\nset B in X : borel\nlet t = {s}\n");
            let p = expr::parse(&text).unwrap();
            let e = match p.lets().next().unwrap().1 { Expr::Set(e) => e.clone(), Expr::Func(_) => unreachable!() };
            e
        };
        let lhs = eval_set(&parse("complement(union(A, B))"), &m).unwrap();
        let rhs = eval_set(&parse("inter(complement(A), complement(B))"), &m).unwrap();
        prop_assert_eq!(&lhs.elems, &rhs.elems);
        let lhs = eval_set(&parse("complement(inter(A, B))"), &m).unwrap();
        let rhs = eval_set(&parse("union(complement(A), complement(B))"), &m).unwrap();
        prop_assert_eq!(&lhs.elems, &rhs.elems);
    }

    #[test]
    fn games_have_exactly_one_winner(k in 2u32..4, n in 0u32..2, seed in any::<u64>()) {
        let plays = (k as usize).pow(2 * n + 2);
        let bits: Vec<bool> = (0..plays).map(|i| (seed.rotate_left(i as u32 % 64) ^ i as u64) & 1 == 1).collect();
        let g = FiniteGame::with_bits(k, n, bits).unwrap();
        let sol = games::solve(&g).unwrap();
        prop_assert!(games::verify_strategy(&g, &sol.strategy, sol.winner));
        // Minimax over the full tree: I can force the target iff I wins, and
        // then II cannot avoid it, so at most one player has a winning strategy.
        prop_assert_eq!(sol.winner == Player::I, forces(&g, &mut Vec::new()));
    }
}

/// Whether Player I can force the target from history `h`.
fn forces(g: &FiniteGame, h: &mut Vec<u32>) -> bool {
    if h.len() == g.play_len() {
        return g.in_target(h);
    }
    let mine = Player::to_move(h.len()) == Player::I;
    let mut any = false;
    let mut all = true;
    for m in 0..g.k() {
        h.push(m);
        let r = forces(g, h);
        h.pop();
        any |= r;
        all &= r;
    }
    if mine { any } else { all }
}
