mod common;

use common::{evaluator, random_symmetric, rng};
use expfun::moments::{
    hausdorff_check, moment_residuals, recover_measure, riesz_functional, transform, Atom, Density,
    DEFAULT_HAUSDORFF_TOL, DEFAULT_PIVOT_TOL,
};
use expfun::{Measure, PolynomialCoeffs};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_atoms(rng: &mut ChaCha8Rng, a: f64, b: f64, count: usize) -> Vec<Atom> {
    (0..count).map(|_| Atom { location: rng.gen_range(a..=b), weight: rng.gen_range(0.05..2.0) }).collect()
}

#[test]
fn transformed_atomic_measures_are_represented() {
    let mut rng = rng(31);
    for _ in 0..60 {
        let len = rng.gen_range(1..=8);
        let e = evaluator(&random_symmetric(&mut rng, len, 1.5));
        let a = rng.gen_range(-2.0..2.0);
        let b = a + rng.gen_range(0.3..3.0);
        let count = rng.gen_range(1..=5);
        let mu = Measure::atoms((a, b), random_atoms(&mut rng, a, b, count)).unwrap();
        let s = transform(&e, &mu).unwrap();
        assert_eq!(s.hypothesis_certified, Some(true));
        assert!(s.values[0] >= 0.0);
        let report = hausdorff_check(&s, DEFAULT_HAUSDORFF_TOL);
        assert!(report.passed, "{:?}", report.conditions.iter().map(|c| (c.name, c.min_eigenvalue)).collect::<Vec<_>>());
        let nu = recover_measure(&s, DEFAULT_PIVOT_TOL).unwrap();
        let (lo, hi) = nu.support();
        assert_eq!((lo, hi), (a, b));
        for atom in nu.atom_list().unwrap() {
            assert!(atom.location >= a && atom.location <= b && atom.weight >= 0.0);
        }
        for (k, r) in moment_residuals(&nu, &s).iter().enumerate() {
            assert!(*r <= 1e-8 * (1.0 + s.values[k].abs()));
        }
    }
}

#[test]
fn transform_is_linear_in_the_measure() {
    let mut rng = rng(32);
    for _ in 0..40 {
        let len = rng.gen_range(1..=7);
        let e = evaluator(&common::random_real(&mut rng, len, 2.0));
        let (a, b) = (0.5, 2.5);
        let first = random_atoms(&mut rng, a, b, 3);
        let second = random_atoms(&mut rng, a, b, 2);
        let c = rng.gen_range(0.1..5.0);
        let s1 = transform(&e, &Measure::atoms((a, b), first.clone()).unwrap()).unwrap();
        let s2 = transform(&e, &Measure::atoms((a, b), second.clone()).unwrap()).unwrap();
        let union: Vec<Atom> = first.iter().chain(&second).copied().collect();
        let s12 = transform(&e, &Measure::atoms((a, b), union).unwrap()).unwrap();
        let scaled: Vec<Atom> = first.iter().map(|at| Atom { location: at.location, weight: c * at.weight }).collect();
        let sc = transform(&e, &Measure::atoms((a, b), scaled).unwrap()).unwrap();
        for k in 0..=e.n() {
            let sum = s1.values[k] + s2.values[k];
            let scale = s1.values[k].abs() + s2.values[k].abs();
            assert!((s12.values[k] - sum).abs() <= 1e-12 * scale + 1e-300);
            assert!((sc.values[k] - c * s1.values[k]).abs() <= 1e-12 * (c * s1.values[k]).abs() + 1e-300);
        }
    }
}

#[test]
fn riesz_functional_matches_direct_integration() {
    let mut rng = rng(33);
    for _ in 0..40 {
        let len = rng.gen_range(1..=7);
        let e = evaluator(&common::random_real(&mut rng, len, 2.0));
        let n = e.n();
        let r = PolynomialCoeffs::new((0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let (a, b) = (-1.0, 1.0);
        let atoms = random_atoms(&mut rng, a, b, 4);
        let mu = Measure::atoms((a, b), atoms.clone()).unwrap();
        let s = transform(&e, &mu).unwrap();
        let direct: f64 = atoms
            .iter()
            .map(|at| at.weight * expfun::inequalities::basis_combination(&e, &r, at.location - a).unwrap())
            .sum();
        assert!((riesz_functional(&s, &r).unwrap() - direct).abs() <= 1e-9 * (1.0 + direct.abs()));

        let density = Measure::density((a, b), Density::uniform(a, b)).unwrap();
        let s = transform(&e, &density).unwrap();
        let (nodes, weights) = expfun::quadrature::gauss_legendre(256, a, b).unwrap();
        let direct: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w / (b - a) * expfun::inequalities::basis_combination(&e, &r, x - a).unwrap())
            .sum();
        assert!((riesz_functional(&s, &r).unwrap() - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }
}

#[test]
fn dominance_transfers_to_moments() {
    // For R ≥ 0 on [0, b − a], Σ aₖ sₖ ≥ ∫ R(x − a) dμ.
    let e = evaluator(&[0.0, 1.0, -1.0, 2.0, -2.0]);
    let mut rng = rng(34);
    for _ in 0..20 {
        let (a, b) = (0.0, 2.0);
        let atoms = random_atoms(&mut rng, a, b, 3);
        let mu = Measure::atoms((a, b), atoms.clone()).unwrap();
        let s = transform(&e, &mu).unwrap();
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = PolynomialCoeffs::square_of(&p);
        let plain: f64 = atoms.iter().map(|at| at.weight * r.eval(at.location - a)).sum();
        assert!(riesz_functional(&s, &r).unwrap() >= plain);
    }
}

#[test]
fn density_recovery_for_builtin_densities() {
    let e = evaluator(&[0.0, 1.0, -1.0, 0.5, -0.5]);
    for density in [Density::uniform(1.0, 3.0), Density::truncated_exponential(1.3, 1.0, 3.0)] {
        let mu = Measure::density((1.0, 3.0), density).unwrap();
        let s = transform(&e, &mu).unwrap();
        assert!(hausdorff_check(&s, DEFAULT_HAUSDORFF_TOL).passed);
        let nu = recover_measure(&s, DEFAULT_PIVOT_TOL).unwrap();
        assert_eq!(nu.atom_list().unwrap().len(), 3);
        assert!(moment_residuals(&nu, &s).iter().zip(&s.values).all(|(r, v)| *r <= 1e-8 * (1.0 + v.abs())));
    }
}
