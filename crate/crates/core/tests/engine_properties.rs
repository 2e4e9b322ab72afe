use std::sync::Arc;

use proptest::prelude::*;
use proptest::sample::subsequence;

use formring::elementary::fu_generators;
use formring::engine::sampler::random_word_sampler;
use formring::engine::{closure_enumerate, mixed_commutator, SubgroupHandle, DEFAULT_BUDGET};
use formring::form_ideal::FormIdeal;
use formring::matrix::UMatrix;
use formring::ring::{zmod, FormRing, InvolutiveRing};

// O+(4, 2) and Sp(4, 2) keep every closure below a thousand elements
fn small(symplectic: bool) -> (FormRing, Vec<UMatrix>) {
    let fr = FormRing::with_bound(Arc::new(zmod(2).unwrap()), 1, symplectic).unwrap();
    let gens = fu_generators(&fr, &FormIdeal::unit(&fr), 2);
    (fr, gens)
}

fn close(ring: &InvolutiveRing, gens: &[UMatrix]) -> SubgroupHandle {
    closure_enumerate(ring, 2, gens, DEFAULT_BUDGET).unwrap()
}

fn sorted_keys(h: &SubgroupHandle) -> Vec<[u64; 4]> {
    let mut k: Vec<_> = h.store.as_ref().unwrap().keys().copied().collect();
    k.sort_unstable();
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_ignores_generator_order(symplectic in any::<bool>(), seed in any::<u64>()) {
        let (fr, gens) = small(symplectic);
        let mut shuffled = gens.clone();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        if seed & 1 == 1 {
            shuffled.reverse();
        }
        prop_assert_eq!(sorted_keys(&close(&fr.ring, &gens)), sorted_keys(&close(&fr.ring, &shuffled)));
    }

    #[test]
    fn closure_is_idempotent(symplectic in any::<bool>(), pick in subsequence((0..8usize).collect::<Vec<_>>(), 1..5)) {
        let (fr, gens) = small(symplectic);
        let some: Vec<UMatrix> = pick.iter().map(|&i| gens[i % gens.len()].clone()).collect();
        let h = close(&fr.ring, &some);
        let again: Vec<UMatrix> = h.store.as_ref().unwrap().iter().collect();
        prop_assert_eq!(sorted_keys(&h), sorted_keys(&close(&fr.ring, &again)));
    }

    #[test]
    fn closure_is_monotone(symplectic in any::<bool>(), pick in subsequence((0..8usize).collect::<Vec<_>>(), 1..6)) {
        let (fr, gens) = small(symplectic);
        let more: Vec<UMatrix> = pick.iter().map(|&i| gens[i % gens.len()].clone()).collect();
        let fewer = &more[..more.len() / 2 + 1];
        let (a, b) = (close(&fr.ring, fewer), close(&fr.ring, &more));
        prop_assert!(a.store.as_ref().unwrap().is_subset(b.store.as_ref().unwrap()));
    }

    #[test]
    fn stores_are_subgroups(symplectic in any::<bool>(), pick in subsequence((0..8usize).collect::<Vec<_>>(), 1..4)) {
        let (fr, gens) = small(symplectic);
        let ring = &*fr.ring;
        let some: Vec<UMatrix> = pick.iter().map(|&i| gens[i % gens.len()].clone()).collect();
        let h = close(ring, &some);
        let store = h.store.as_ref().unwrap();
        prop_assert!(store.contains(&UMatrix::identity(ring, 2)));
        let all: Vec<UMatrix> = store.iter().collect();
        for x in &all {
            prop_assert!(store.contains(&x.inverse(ring).unwrap()));
            for y in &all {
                prop_assert!(store.contains(&x.mul(ring, y)));
            }
        }
    }

    #[test]
    fn commutator_is_symmetric(a in subsequence((0..8usize).collect::<Vec<_>>(), 1..4), b in subsequence((0..8usize).collect::<Vec<_>>(), 1..4)) {
        let (fr, gens) = small(true);
        let ring = &*fr.ring;
        let pick = |idx: &[usize]| -> Vec<UMatrix> { idx.iter().map(|&i| gens[i % gens.len()].clone()).collect() };
        let (h, k) = (close(ring, &pick(&a)), close(ring, &pick(&b)));
        let hk = mixed_commutator(ring, &h, &k, DEFAULT_BUDGET).unwrap();
        let kh = mixed_commutator(ring, &k, &h, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(sorted_keys(&hk), sorted_keys(&kh));
    }
}

#[test]
fn commutator_with_trivial_group() {
    let (fr, gens) = small(true);
    let ring = &*fr.ring;
    let h = close(ring, &gens);
    let e = SubgroupHandle::trivial(ring, 2).unwrap();
    assert_eq!(mixed_commutator(ring, &h, &e, DEFAULT_BUDGET).unwrap().size(), Some(1));
}

// three subgroup lemma on the normal subgroups G ⊇ [G,G] ⊇ [[G,G],[G,G]] of Sp(4, 2) ≅ S6
#[test]
fn three_subgroup_inclusion() {
    let (fr, gens) = small(true);
    let ring = &*fr.ring;
    let g = close(ring, &gens);
    let d = mixed_commutator(ring, &g, &g, DEFAULT_BUDGET).unwrap();
    let dd = mixed_commutator(ring, &d, &d, DEFAULT_BUDGET).unwrap();
    assert_eq!((g.size(), d.size()), (Some(720), Some(360)));
    let normals = [&g, &d, &dd];
    let comm = |x: &SubgroupHandle, y: &SubgroupHandle| mixed_commutator(ring, x, y, DEFAULT_BUDGET).unwrap();
    for f in normals {
        for h in normals {
            for l in normals {
                let lhs = comm(&comm(f, h), l);
                let (x, y) = (comm(&comm(f, l), h), comm(f, &comm(h, l)));
                let product = close(ring, &[x.generators.clone(), y.generators.clone()].concat());
                assert!(lhs.store.as_ref().unwrap().is_subset(product.store.as_ref().unwrap()));
            }
        }
    }
}

#[test]
fn word_sampler_contract() {
    let (fr, gens) = small(false);
    let ring = &*fr.ring;
    let id = UMatrix::identity(ring, 2);
    assert!(random_word_sampler(ring, 2, &gens, 0, 5, 3).unwrap().iter().all(|w| *w == id));
    let a = random_word_sampler(ring, 2, &gens, 12, 200, 99).unwrap();
    let b = std::thread::spawn({
        let (ring, gens) = (fr.ring.clone(), gens.clone());
        move || random_word_sampler(&ring, 2, &gens, 12, 200, 99).unwrap()
    })
    .join()
    .unwrap();
    assert_eq!(a, b);
    let h = close(ring, &gens);
    assert!(a.iter().all(|w| h.contains(w) == Some(true)));
}
