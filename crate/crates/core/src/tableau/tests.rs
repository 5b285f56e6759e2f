use super::*;
use crate::graph::{replay, GraphOp};
use proptest::prelude::*;

// Dense state vectors, qubit j at bit j of the basis index.
type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn basis_zero(n: usize) -> Vec<C> {
    let mut v = vec![(0.0, 0.0); 1 << n];
    v[0] = (1.0, 0.0);
    v
}

fn sv_gate(psi: &mut [C], g: &Gate) {
    let dim = psi.len();
    let bit = |k: usize, q: usize| k >> q & 1 == 1;
    match *g {
        Gate::H(q) => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            for k in 0..dim {
                if !bit(k, q) {
                    let (a, b) = (psi[k], psi[k | 1 << q]);
                    psi[k] = ((a.0 + b.0) * r, (a.1 + b.1) * r);
                    psi[k | 1 << q] = ((a.0 - b.0) * r, (a.1 - b.1) * r);
                }
            }
        }
        Gate::S(q) => (0..dim).filter(|&k| bit(k, q)).for_each(|k| psi[k] = cmul(psi[k], (0.0, 1.0))),
        Gate::Sdg(q) => (0..dim).filter(|&k| bit(k, q)).for_each(|k| psi[k] = cmul(psi[k], (0.0, -1.0))),
        Gate::Z(q) => (0..dim).filter(|&k| bit(k, q)).for_each(|k| psi[k] = (-psi[k].0, -psi[k].1)),
        Gate::X(q) => (0..dim).filter(|&k| !bit(k, q)).for_each(|k| psi.swap(k, k | 1 << q)),
        Gate::Y(q) => {
            sv_gate(psi, &Gate::Z(q));
            sv_gate(psi, &Gate::X(q));
            psi.iter_mut().for_each(|a| *a = cmul(*a, (0.0, 1.0)));
        }
        Gate::Cz(a, b) => (0..dim).filter(|&k| bit(k, a) && bit(k, b)).for_each(|k| psi[k] = (-psi[k].0, -psi[k].1)),
        Gate::Swap(a, b) => {
            (0..dim).filter(|&k| bit(k, a) && !bit(k, b)).for_each(|k| psi.swap(k, k ^ (1 << a) ^ (1 << b)))
        }
        _ => unreachable!("oracle handles unitary gates only"),
    }
}

// ⟨ψ| (-1)^sign X^x Z^z-with-Y |ψ⟩ for tableau row r.
fn expectation(psi: &[C], t: &Tableau, r: usize) -> f64 {
    let mut phi = psi.to_vec();
    for q in 0..t.n() {
        let g = match (t.x(r, q), t.z(r, q)) {
            (false, false) => continue,
            (true, false) => Gate::X(q),
            (false, true) => Gate::Z(q),
            (true, true) => Gate::Y(q),
        };
        sv_gate(&mut phi, &g);
    }
    let ip: f64 = psi.iter().zip(&phi).map(|(a, b)| a.0 * b.0 + a.1 * b.1).sum();
    if t.signs()[r] {
        -ip
    } else {
        ip
    }
}

fn stabilizes(psi: &[C], t: &Tableau) -> bool {
    (0..t.n()).all(|r| (expectation(psi, t, r) - 1.0).abs() < 1e-9)
}

// Projects qubit q onto `outcome` and removes it; returns the probability.
fn sv_measure(psi: &[C], q: usize, outcome: bool) -> (Vec<C>, f64) {
    let mut out = Vec::with_capacity(psi.len() / 2);
    for k in 0..psi.len() {
        if (k >> q & 1 == 1) == outcome {
            out.push(psi[k]);
        }
    }
    let p: f64 = out.iter().map(|a| a.0 * a.0 + a.1 * a.1).sum();
    let s = p.sqrt();
    if s > 0.0 {
        out.iter_mut().for_each(|a| *a = (a.0 / s, a.1 / s));
    }
    (out, p)
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..8usize, 0..n, 1..n).prop_map(move |(k, a, off)| {
        let b = (a + off) % n;
        match k {
            0 => Gate::H(a),
            1 => Gate::S(a),
            2 => Gate::Sdg(a),
            3 => Gate::X(a),
            4 => Gate::Y(a),
            5 => Gate::Z(a),
            6 => Gate::Cz(a, b),
            _ => Gate::Swap(a, b),
        }
    })
}

fn all_symplectic() -> &'static [Symplectic2Q] {
    static ALL: std::sync::OnceLock<Vec<Symplectic2Q>> = std::sync::OnceLock::new();
    ALL.get_or_init(|| (0..=u16::MAX).map(Symplectic2Q::from_u16).filter(|m| m.is_symplectic()).collect())
}

fn sim(c: &Circuit) -> Simulation {
    simulate(c, &mut MeasurePolicy::seeded(3)).unwrap()
}

#[test]
fn basic_states() {
    let p = Tableau::plus_state(2);
    assert_eq!(p.generators(), &BitMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0]]));
    let z = Tableau::zero_state(1);
    assert_eq!(z.generators(), &BitMatrix::from_rows(&[[0, 1]]));
    assert!(stabilizes(&basis_zero(1), &z));
    assert_eq!(Tableau::plus_state(0).n(), 0);
    assert!(p.is_valid());
}

#[test]
fn gate_identities() {
    let mut t = Tableau::plus_state(2);
    t.apply_gate(&Gate::Cz(0, 1)).unwrap();
    assert_eq!(t.generators(), &BitMatrix::from_rows(&[[1, 0, 0, 1], [0, 1, 1, 0]]));
    assert_eq!(t.signs(), &[false, false]);
    assert_eq!(t, Tableau::graph_state(&Graph::complete(2)));
    let base = t.clone();
    t.apply_gate(&Gate::H(1)).unwrap();
    t.apply_gate(&Gate::H(1)).unwrap();
    assert_eq!(t, base);
    let mut y = Tableau::plus_state(1);
    y.apply_gate(&Gate::S(0)).unwrap();
    assert_eq!(y.signs(), &[false]);
    for _ in 0..3 {
        y.apply_gate(&Gate::S(0)).unwrap();
    }
    assert_eq!(y, Tableau::plus_state(1));
    assert!(t.apply_gate(&Gate::Cz(0, 0)).is_err());
    assert!(t.apply_gate(&Gate::H(2)).is_err());
}

#[test]
fn measurement_examples() {
    let mut z = Tableau::zero_state(1);
    let m = z.measure_z(0, &mut MeasurePolicy::ForceOne).unwrap();
    assert_eq!(m, Measurement { outcome: false, deterministic: true });
    let mut p = Tableau::plus_state(1);
    let m = p.measure_z(0, &mut MeasurePolicy::ForceZero).unwrap();
    assert_eq!(m, Measurement { outcome: false, deterministic: false });

    let mut k2 = Tableau::graph_state(&Graph::complete(2));
    k2.measure_z(0, &mut MeasurePolicy::ForceZero).unwrap();
    assert_eq!(k2, Tableau::plus_state(1));
    let mut psi = basis_zero(2);
    for g in [Gate::H(0), Gate::H(1), Gate::Cz(0, 1)] {
        sv_gate(&mut psi, &g);
    }
    let (rest, prob) = sv_measure(&psi, 0, false);
    assert!((prob - 0.5).abs() < 1e-12);
    assert!(stabilizes(&rest, &k2));
}

#[test]
fn graph_state_checks() {
    assert_eq!(check_graph_state(&Tableau::plus_state(3), &Graph::empty(3)), GraphStateCheck::Exact);
    assert_eq!(check_graph_state(&Tableau::plus_state(2), &Graph::complete(2)), GraphStateCheck::Mismatch);
    assert_eq!(check_graph_state(&Tableau::zero_state(2), &Graph::empty(2)), GraphStateCheck::Mismatch);
    assert_eq!(check_graph_state(&Tableau::plus_state(2), &Graph::empty(3)), GraphStateCheck::Mismatch);
    let g = Graph::cycle(5);
    let mut t = Tableau::graph_state(&g);
    t.apply_gate(&Gate::X(2)).unwrap();
    t.apply_gate(&Gate::Z(0)).unwrap();
    let GraphStateCheck::UpToPauli { correction } = check_graph_state(&t, &g) else {
        panic!("expected a Pauli correction");
    };
    t.apply_pauli(&correction).unwrap();
    assert_eq!(check_graph_state(&t, &g), GraphStateCheck::Exact);
}

#[test]
fn compiled_single_operations() {
    let one = |initial: &Graph, op: GraphOp| {
        let mut trace = OpTrace::new(initial.n());
        for (u, v) in initial.edges() {
            trace.push(GraphOp::Ec1(u, v));
        }
        trace.push(op);
        let c = trace_to_circuit(&trace).unwrap();
        let expect = initial.apply_op(op).unwrap();
        check_graph_state(&sim(&c).tableau, &expect)
    };
    let t = OpTrace { initial: 2, ops: vec![GraphOp::Ec1(0, 1)] };
    let c = trace_to_circuit(&t).unwrap();
    assert_eq!(c.gates, vec![Gate::H(0), Gate::H(1), Gate::Cz(0, 1)]);
    assert_eq!(check_graph_state(&sim(&c).tableau, &Graph::complete(2)), GraphStateCheck::Exact);
    let p = Graph::from_edges(4, &[(0, 2), (1, 3), (1, 2)]).unwrap();
    assert!(one(&p, GraphOp::Ec2(0, 1)).is_match());
    assert!(one(&p, GraphOp::Ec3(0, 1)).is_match());
    assert!(one(&p, GraphOp::Lc(2)).is_match());
    let t = OpTrace { initial: 2, ops: vec![GraphOp::Ec3(0, 1)] };
    let c = trace_to_circuit(&t).unwrap();
    assert_eq!(c.cz_count(), 1);
    assert!(trace_to_circuit(&OpTrace { initial: 2, ops: vec![GraphOp::Ec1(0, 1), GraphOp::Ec3(0, 1)] }).is_err());
}

#[test]
fn circuit_text() {
    let text = "CIRCUIT n=3\nH 0\nSDG 1\nCZ 0 1\nSWAP 1 2\nC2 0 2 1001011000100001\nMEASZ 0\nZ 1 IF 0\n";
    let c = Circuit::parse(text).unwrap();
    assert_eq!(c.serialize(), text);
    assert_eq!(c.two_qubit_count(), 3);
    assert!(Circuit::parse("CIRCUIT n=2\nCZ 0 0\n").is_err());
    assert!(Circuit::parse("CIRCUIT n=2\nH 2\n").is_err());
    assert!(Circuit::parse("CIRCUIT n=2\nZ 1 IF 0\n").is_err());
    assert!(Circuit::parse("CIRCUIT n=2\nMEASZ 0\nH 0\n").is_err());
    assert!(Circuit::parse("H 0\n").is_err());
    assert!(Circuit::parse("CIRCUIT n=2\nFOO 1\n").is_err());
}

#[test]
fn two_qubit_classes() {
    let counts = enumerate_two_qubit_classes();
    assert_eq!(counts.per_class, [36, 324, 324, 36]);
    assert_eq!(counts.total, 720);
    assert_eq!(counts.unclassified, 0);
    assert_eq!(normal_form_counts(), [36, 324, 324, 36]);
}

#[test]
fn every_symplectic_matrix_round_trips() {
    let all = all_symplectic();
    assert_eq!(all.len(), 720);
    for m in all {
        let m = *m;
        let c = decompose_two_qubit(&m).unwrap();
        let swaps = c.gates.iter().filter(|g| matches!(g, Gate::Swap(..))).count();
        assert!(c.cz_count() <= 1 && swaps <= 1);
        assert_eq!(Symplectic2Q::of_gates(&c.gates).unwrap(), m);
    }
}

#[test]
fn rewrite_examples() {
    let mut c = Circuit::new(3);
    c.gates = vec![Gate::Cz(0, 1), Gate::Cz(1, 2)];
    let r = rewrite_circuit(&c).unwrap();
    assert_eq!(r.permutation, vec![0, 1, 2]);
    assert_eq!(r.circuit, c);
    let mut s = Circuit::new(2);
    s.push(Gate::Swap(0, 1));
    let r = rewrite_circuit(&s).unwrap();
    assert_eq!(r.permutation, vec![1, 0]);
    assert!(r.circuit.gates.is_empty());
    assert_eq!(r.action().unwrap(), circuit_action(&s).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tableau_agrees_with_state_vector(gates in prop::collection::vec(arb_gate(3), 0..25)) {
        let mut t = Tableau::zero_state(3);
        let mut psi = basis_zero(3);
        for g in &gates {
            t.apply_gate(g).unwrap();
            sv_gate(&mut psi, g);
        }
        prop_assert!(t.is_valid());
        prop_assert!(stabilizes(&psi, &t));
    }

    #[test]
    fn measurement_agrees_with_state_vector(gates in prop::collection::vec(arb_gate(3), 0..25), q in 0..3usize, force in any::<bool>()) {
        let mut t = Tableau::zero_state(3);
        let mut psi = basis_zero(3);
        for g in &gates {
            t.apply_gate(g).unwrap();
            sv_gate(&mut psi, g);
        }
        let mut policy = if force { MeasurePolicy::ForceOne } else { MeasurePolicy::ForceZero };
        let m = t.measure_z(q, &mut policy).unwrap();
        let (rest, prob) = sv_measure(&psi, q, m.outcome);
        if m.deterministic {
            prop_assert!((prob - 1.0).abs() < 1e-9);
        } else {
            prop_assert!((prob - 0.5).abs() < 1e-9);
            prop_assert_eq!(m.outcome, force);
        }
        prop_assert!(t.is_valid());
        prop_assert!(stabilizes(&rest, &t));
    }

    #[test]
    fn actions_compose(g1 in arb_gate(3), g2 in arb_gate(3)) {
        let a = |gs: Vec<Gate>| circuit_action(&Circuit { n: 3, gates: gs }).unwrap();
        prop_assert_eq!(a(vec![g1, g2]), a(vec![g1]).mul(&a(vec![g2])));
    }

    #[test]
    fn compiled_traces_prepare_their_graphs(n in 2usize..7, raw in prop::collection::vec((0..5usize, 0..7usize, 0..7usize), 0..20), seed in any::<u64>()) {
        // build a valid random trace by filtering ops against a running replay
        let mut trace = OpTrace::new(n);
        let mut g = Graph::empty(n);
        let mut alive: Vec<usize> = (0..n).collect();
        for (k, a, b) in raw {
            if alive.len() < 2 {
                break;
            }
            let (la, lb) = (a % alive.len(), b % alive.len());
            if la == lb {
                continue;
            }
            let local = match k {
                0 => GraphOp::Lc(la),
                1 => GraphOp::Ec1(la, lb),
                2 => GraphOp::Ec2(la, lb),
                3 if !g.has_edge(la, lb) => GraphOp::Ec3(la, lb),
                4 if alive.len() > 2 => GraphOp::Delete(la),
                _ => continue,
            };
            g.apply_op_mut(local).unwrap();
            trace.push(local.map(|x| alive[x]));
            if let GraphOp::Delete(v) = local {
                alive.remove(v);
            }
        }
        prop_assert_eq!(replay(&trace).unwrap(), g.clone());
        let (check, s) = verify_trace(&trace, &g, seed).unwrap();
        prop_assert!(check.is_match(), "{}", check);
        prop_assert_eq!(s.qubits, trace.survivors());
    }

    #[test]
    fn measuring_a_graph_state_deletes_the_vertex(n in 2usize..8, bits in prop::collection::vec(any::<bool>(), 28), v in 0..8usize, one in any::<bool>()) {
        let v = v % n;
        let mut g = Graph::empty(n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                g.set_edge(a, b, bits[k]);
                k += 1;
            }
        }
        let mut t = Tableau::graph_state(&g);
        let mut policy = if one { MeasurePolicy::ForceOne } else { MeasurePolicy::ForceZero };
        let m = t.measure_z(v, &mut policy).unwrap();
        prop_assert_eq!(m.outcome, one);
        if one {
            for u in g.neighbors(v) {
                t.apply_gate(&Gate::Z(if u > v { u - 1 } else { u })).unwrap();
            }
        }
        prop_assert_eq!(check_graph_state(&t, &g.delete_vertex(v).unwrap()), GraphStateCheck::Exact);
    }

    #[test]
    fn rewriting_preserves_action(picks in prop::collection::vec((0..720usize, 0..4usize, 1..4usize, 0..3usize), 3)) {
        let all = all_symplectic();
        let mut c = Circuit::new(4);
        for (m, a, off, kind) in picks {
            let b = (a + off) % 4;
            c.push(match kind {
                0 => Gate::Swap(a, b),
                1 => Gate::Cz(a, b),
                _ => Gate::Clifford2 { a, b, mat: all[m] },
            });
        }
        let r = rewrite_circuit(&c).unwrap();
        let plain = r.circuit.gates.iter().all(|g| !matches!(g, Gate::Swap(..) | Gate::Clifford2 { .. }));
        prop_assert!(plain);
        prop_assert!(r.circuit.cz_count() <= 3);
        prop_assert_eq!(r.action().unwrap(), circuit_action(&c).unwrap());
    }

    #[test]
    fn clifford2_gate_keeps_tableau_valid(m in 0..720usize, gates in prop::collection::vec(arb_gate(3), 0..10)) {
        let mat = all_symplectic()[m];
        let mut t = Tableau::zero_state(3);
        let mut psi = basis_zero(3);
        for g in &gates {
            t.apply_gate(g).unwrap();
            sv_gate(&mut psi, g);
        }
        t.apply_gate(&Gate::Clifford2 { a: 0, b: 2, mat }).unwrap();
        for g in decompose_two_qubit(&mat).unwrap().gates {
            sv_gate(&mut psi, &g.relabel(|q| if q == 1 { 2 } else { q }));
        }
        prop_assert!(t.is_valid());
        prop_assert!(stabilizes(&psi, &t));
    }
}
