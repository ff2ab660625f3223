use eigencm::posets::{boolean_lattice, chain, read_hasse, write_hasse, Poset};
use proptest::prelude::*;

/// Random poset: a random DAG on `0..n` with edges only from smaller to larger labels.
fn random_poset() -> impl Strategy<Value = Poset<usize>> {
    (1usize..10).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.3), n * n).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * n + j]).collect();
            Poset::from_covers((0..n).collect(), &edges).unwrap()
        })
    })
}

fn brute_covers(p: &Poset<usize>) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if p.lt(i, j) && !(0..n).any(|k| p.lt(i, k) && p.lt(k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn brute_length(p: &Poset<usize>) -> isize {
    fn longest(p: &Poset<usize>, x: usize) -> isize {
        p.covers(x).iter().map(|&y| 1 + longest(p, y)).max().unwrap_or(0)
    }
    (0..p.len()).map(|x| longest(p, x)).max().unwrap_or(-1)
}

/// Same items with the same order relation, regardless of index order.
fn same_poset(a: &Poset<usize>, b: &Poset<usize>) -> bool {
    let mut ia: Vec<usize> = a.items().to_vec();
    let mut ib: Vec<usize> = b.items().to_vec();
    ia.sort_unstable();
    ib.sort_unstable();
    if ia != ib {
        return false;
    }
    let pos = |p: &Poset<usize>, v: usize| p.items().iter().position(|&x| x == v).unwrap();
    ia.iter().all(|&x| ia.iter().all(|&y| a.leq(pos(a, x), pos(a, y)) == b.leq(pos(b, x), pos(b, y))))
}

proptest! {
    #[test]
    fn covers_match_brute_force(p in random_poset()) {
        prop_assert_eq!(p.cover_pairs(), brute_covers(&p));
        prop_assert_eq!(p.length(), brute_length(&p));
    }

    #[test]
    fn link_equals_join_decomposition(p in random_poset(), seed in any::<u64>()) {
        // random chain: walk up covers from a seed-chosen element
        let mut c = vec![(seed as usize) % p.len()];
        let mut s = seed;
        while let Some(&next) = p.covers(*c.last().unwrap()).get((s % 3) as usize) {
            if s % 5 == 0 { break; }
            c.push(next);
            s /= 3;
        }
        let direct = p.link(&c).unwrap();
        let joined = p.link_by_decomposition(&c).unwrap();
        prop_assert!(same_poset(&direct, &joined));
    }

    #[test]
    fn join_and_product_lengths(p in random_poset(), q in random_poset()) {
        prop_assert_eq!(p.join(&q).length(), p.length() + q.length() + 1);
        prop_assert_eq!(p.product(&q).length(), p.length() + q.length());
    }

    #[test]
    fn hasse_round_trip(p in random_poset()) {
        let mut buf = Vec::new();
        write_hasse(&p, &mut buf).unwrap();
        let q = read_hasse(&buf[..]).unwrap();
        prop_assert_eq!(q.cover_pairs(), p.cover_pairs());
    }
}

#[test]
fn boolean_lattice_facts() {
    let b = boolean_lattice(4);
    assert_eq!(b.len(), 16);
    assert_eq!(b.cover_count(), 32);
    assert_eq!(b.length(), 4);
    assert!(b.lattice_report().geometric);
    assert!(chain(5).lattice_report().ranked);
}
