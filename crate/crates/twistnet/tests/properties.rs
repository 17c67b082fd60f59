//! Randomized invariants of the Pauli algebra, Clifford conjugation, the
//! tensor engine and its text formats.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;
use twistnet::linalg::Mat;
use twistnet::pauli::{conjugate_by_circuit, hadamard_mat, CliffordCircuit, Gate, PauliTerm};
use twistnet::Tensor;

const SITES: [&str; 3] = ["a", "b", "c"];

fn order() -> Vec<String> {
    SITES.iter().map(|s| s.to_string()).collect()
}

/// Dense matrix of a term from the clock and shift conventions,
/// X|j> = |j-1>, Z|j> = ω^j |j>, global phase ζ^k with ζ = e^{2πi/4N}.
fn dense(t: &PauliTerm) -> Mat {
    let n = t.modulus() as usize;
    let w = C64::from_polar(1.0, 2.0 * PI / n as f64);
    let mut m = Mat::eye(1);
    for s in SITES {
        let (x, z) = t.power(s);
        let f = Mat::from_fn(n, n, |r, c| if (r + x as usize) % n == c { w.powu((c as u32 * z) % n as u32) } else { C64::new(0.0, 0.0) });
        m = m.kron(&f);
    }
    m.scale(C64::from_polar(1.0, 2.0 * PI * t.phase_exponent() as f64 / (4 * n) as f64))
}

fn term(n: u32) -> impl Strategy<Value = PauliTerm> {
    (prop::collection::vec((0..n as i64, 0..n as i64), 3), 0..4 * n as i64).prop_map(move |(p, k)| {
        SITES.iter().zip(p).fold(PauliTerm::identity(n), |t, (s, (x, z))| t.with(s, x, z)).rephase(k)
    })
}

fn gate() -> impl Strategy<Value = Gate> {
    (0..6usize, 0..3usize, 1..3usize).prop_map(|(kind, i, j)| {
        let a = SITES[i].to_string();
        let b = SITES[(i + j) % 3].to_string();
        match kind {
            0 => Gate::H(a),
            1 => Gate::Hdag(a),
            2 => Gate::Cx(a, b),
            3 => Gate::Cz(a, b),
            4 => Gate::Czx(a, b),
            _ => Gate::Swap(a, b),
        }
    })
}

fn circuit(n: u32) -> impl Strategy<Value = CliffordCircuit> {
    prop::collection::vec(gate(), 0..6).prop_map(move |gs| gs.into_iter().fold(CliffordCircuit::new(n), |c, g| c.push(g)))
}

fn modulus_and_terms() -> impl Strategy<Value = (u32, PauliTerm, PauliTerm)> {
    (2u32..=4).prop_flat_map(|n| (Just(n), term(n), term(n)))
}

fn entries(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| C64::new(r, i)), len)
}

fn tensor(labels: &'static [&'static str]) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(1usize..4, labels.len())
        .prop_flat_map(move |shape| (Just(shape.clone()), entries(shape.iter().product())))
        .prop_map(move |(shape, data)| Tensor::new(labels.to_vec(), shape, data).unwrap())
}

fn matrix(r: &'static str, c: &'static str, rows: usize, cols: usize) -> impl Strategy<Value = Tensor> {
    entries(rows * cols).prop_map(move |data| Tensor::new(vec![r, c], vec![rows, cols], data).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_matrix_product((_, a, b) in modulus_and_terms()) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(dense(&ab).max_abs_diff(&(&dense(&a) * &dense(&b))) < 1e-9);
    }

    #[test]
    fn commutation_phase_matches_matrices((n, a, b) in modulus_and_terms()) {
        let w = C64::from_polar(1.0, 2.0 * PI * a.commutation(&b) as f64 / n as f64);
        let lhs = &dense(&a) * &dense(&b);
        let rhs = (&dense(&b) * &dense(&a)).scale(w);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn dagger_is_adjoint((_, a, _) in modulus_and_terms()) {
        prop_assert!(dense(&a.dagger()).max_abs_diff(&dense(&a).dag()) < 1e-9);
    }

    #[test]
    fn grammar_round_trip((n, a, _) in modulus_and_terms()) {
        prop_assert_eq!(PauliTerm::parse(n, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn conjugation_matches_circuit_matrix(
        (_, p, q, c) in (2u32..=3).prop_flat_map(|n| (Just(n), term(n), term(n), circuit(n)))
    ) {
        let u = c.matrix_on(&order()).unwrap();
        let img = conjugate_by_circuit(&c, &p).unwrap();
        prop_assert!(dense(&img).max_abs_diff(&(&(&u.dag() * &dense(&p)) * &u)) < 1e-9);
        // commutation survives conjugation
        let img_q = conjugate_by_circuit(&c, &q).unwrap();
        prop_assert_eq!(img.commutation(&img_q), p.commutation(&q));
    }

    #[test]
    fn tensor_dump_round_trip(t in tensor(&["l0", "l1", "l2"])) {
        prop_assert_eq!(Tensor::parse_dump(&t.dump()).unwrap(), t);
    }

    #[test]
    fn contraction_is_associative(
        (a, b, c) in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(d, e, f)| (
            matrix("i", "j", 2, d),
            matrix("j", "k", d, e),
            matrix("k", "l", e, f),
        ))
    ) {
        let left = a.contract(&b, &[("j", "j")]).unwrap().contract(&c, &[("k", "k")]).unwrap();
        let right = a.contract(&b.contract(&c, &[("k", "k")]).unwrap(), &[("j", "j")]).unwrap();
        let (lm, rm) = (left.to_matrix(&["i"], &["l"]).unwrap(), right.to_matrix(&["i"], &["l"]).unwrap());
        prop_assert!(lm.max_abs_diff(&rm) < 1e-9);
    }
}

#[test]
fn hadamard_is_unitary_with_order_four() {
    for n in 2..=5 {
        let h = hadamard_mat(n);
        assert!(h.is_unitary(1e-12), "N = {n}");
        assert!(h.pow(4).max_abs_diff(&Mat::eye(n as usize)) < 1e-12, "N = {n}");
        // H² is charge conjugation |j> -> |-j>
        let c = Mat::from_fn(n as usize, n as usize, |r, col| C64::new(if (r + col) % n as usize == 0 { 1.0 } else { 0.0 }, 0.0));
        assert!(h.pow(2).max_abs_diff(&c) < 1e-12, "N = {n}");
    }
}
