use jtrace::deriv::{act_on_cyclic, cbar_lattice, LatticeBudget};
use jtrace::letters::SignedPerm;
use jtrace::trbar::{sample_trace_free, tr_mir, trbar_formula_exact};
use jtrace::trees::{eta, tree_bracket, TreeSum};
use jtrace::CyclicClass;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn in_cbar(c: &CyclicClass) -> bool {
    c.is_zero()
        || cbar_lattice(c.degree(), c.genus(), &LatticeBudget::default())
            .unwrap()
            .contains(c)
            .unwrap()
}

fn kernel_sample(seed: u64, g: usize, k: usize) -> Option<TreeSum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = sample_trace_free(&mut rng, g, k, 24);
    if s.is_empty() {
        None
    } else {
        let i = (seed as usize) % s.len();
        Some(s.swap_remove(i))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symplectic_relabelling_commutes(seed in any::<u64>(), which in 0usize..3) {
        let g = 2;
        let d = kernel_sample(seed, g, 2);
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let p = match which {
            0 => SignedPerm::swap_pairs(g, 1, 2),
            1 => SignedPerm::rotate_pair(g, 1),
            _ => SignedPerm::rotate_pair(g, 2),
        };
        let lhs = trbar_formula_exact(&d.relabel(&p)).unwrap();
        let rhs = trbar_formula_exact(&d).unwrap().relabel(&p);
        prop_assert!(in_cbar(&(&lhs - &rhs)));
    }

    #[test]
    fn values_are_two_torsion(seed in any::<u64>()) {
        let d = kernel_sample(seed, 2, 2);
        prop_assume!(d.is_some());
        let rep = trbar_formula_exact(&d.unwrap()).unwrap();
        prop_assert!(in_cbar(&rep.scale(&jtrace::freelie::q(2))));
    }

    #[test]
    fn cocycle_modulo_cbar(seed in any::<u64>()) {
        // degree one trace-free trees only appear from genus three
        let g = 3;
        let d1 = kernel_sample(seed, g, 1);
        let d2 = kernel_sample(seed ^ 0x5555, g, 1);
        prop_assume!(d1.is_some() && d2.is_some());
        let (d1, d2) = (d1.unwrap(), d2.unwrap());
        let br = tree_bracket(&d1, &d2).unwrap();
        prop_assume!(!br.is_empty());
        let lhs = trbar_formula_exact(&br).unwrap();
        let t1 = trbar_formula_exact(&d1).unwrap();
        let t2 = trbar_formula_exact(&d2).unwrap();
        let rhs = &act_on_cyclic(&eta(&d1), &t2) - &act_on_cyclic(&eta(&d2), &t1);
        prop_assert!(in_cbar(&(&lhs - &rhs)));
    }

    #[test]
    fn presentation_independence(seed in any::<u64>()) {
        // the same element written with every term split in two
        let d = kernel_sample(seed, 2, 2);
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let split = d.add(&d).add(&d.scale(&(-1).into()));
        let x = trbar_formula_exact(&d).unwrap();
        let y = trbar_formula_exact(&split).unwrap();
        prop_assert!(in_cbar(&(&x - &y)));
    }

    #[test]
    fn mirror_vanishes_in_odd_degree(seed in any::<u64>()) {
        let d = kernel_sample(seed, 3, 3);
        prop_assume!(d.is_some());
        prop_assert!(tr_mir(&d.unwrap()).unwrap().is_zero());
    }
}
