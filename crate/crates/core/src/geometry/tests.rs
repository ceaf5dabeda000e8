use super::*;
use crate::combinatorics::{
    cell_dimension, codim_one_cells, enumerate_admissible, enumerate_admissible_parabolic, is_admissible,
    is_admissible_parabolic, num_roots, relative_dimension, slot_support, Collection, IndexSet, ParabolicShape,
    RootIndex,
};
use crate::linalg::{q, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn set(n: usize, e: &[usize]) -> IndexSet {
    IndexSet::new(n, e).unwrap()
}

fn coord(n: usize, e: &[usize]) -> Subspace {
    Subspace::coordinate(set(n, e))
}

fn vecq(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn span(n: usize, rows: &[&[i64]]) -> Subspace {
    Subspace::from_rows(n, rows.iter().map(|r| vecq(r)).collect())
}

fn flag(n: usize, spaces: Vec<Subspace>) -> FlagPoint {
    FlagPoint::full(n, spaces).unwrap()
}

#[test]
fn projection_examples() {
    let p = projection_pr(3, 2).unwrap();
    assert_eq!(apply(&p, &vecq(&[1, 1, 1])), vecq(&[1, 0, 1]));
    assert_eq!(projection_pr_range(4, 1, 1).unwrap(), crate::linalg::Matrix::identity(4));
    let p = projection_pr_range(4, 2, 4).unwrap();
    assert_eq!(apply(&p, &vecq(&[1, 1, 1, 1])), vecq(&[1, 0, 0, 1]));
    assert!(projection_pr(3, 0).is_err());
    assert!(projection_pr_range(3, 3, 2).is_err());
}

#[test]
fn subspace_operations() {
    let a = span(4, &[&[1, 1, 0, 0], &[0, 0, 1, 0]]);
    let b = span(4, &[&[1, 1, 1, 0], &[0, 0, 0, 1]]);
    assert_eq!(a.dim(), 2);
    assert_eq!(a.intersection(&b), span(4, &[&[1, 1, 1, 0]]));
    assert_eq!(a.sum(&b).dim(), 3);
    assert_eq!(a.annihilator().dim(), 2);
    assert!(a.contains(&span(4, &[&[2, 2, 3, 0]])));
    assert_eq!(span(3, &[&[2, 4, 0], &[1, 2, 1]]), span(3, &[&[1, 2, 0], &[0, 0, 5]]));
    assert_eq!(a.kill(set(4, &[3])), span(4, &[&[1, 1, 0, 0]]));
    assert_eq!(coord(3, &[1, 3]).as_coordinate(), Some(set(3, &[1, 3])));
    assert_eq!(span(3, &[&[1, 1, 0]]).as_coordinate(), None);
    assert_eq!(Subspace::zero(4).intersection(&a.kill(set(4, &[]))).dim(), 0);
}

#[test]
fn degenerate_flag_examples() {
    for n in 2..=5 {
        assert!(is_degenerate_flag(&FlagPoint::coordinate(n, (1..n).collect())).unwrap());
    }
    assert!(is_degenerate_flag(&flag(2, vec![span(2, &[&[1, 1]])])).unwrap());
    assert!(is_degenerate_flag(&flag(3, vec![coord(3, &[2]), coord(3, &[1, 3])])).unwrap());
    // pr_2 w_1 = w_1 is not in span(w_2, w_3)
    assert!(!is_degenerate_flag(&flag(3, vec![coord(3, &[1]), coord(3, &[2, 3])])).unwrap());
    // V_1 needs dimension 1
    let bad = flag(3, vec![coord(3, &[1, 2]), coord(3, &[1, 3])]);
    assert!(matches!(is_degenerate_flag(&bad), Err(Error::Malformed { .. })));
    // parabolic: pr_2 pr_3 V_1 inside V_3 for d = (1,3), n = 4
    let shape = ParabolicShape::new(4, vec![1, 3]).unwrap();
    let x = FlagPoint::new(4, vec![1, 3], vec![span(4, &[&[1, 1, 1, 0]]), coord(4, &[1, 2, 4])]).unwrap();
    assert!(is_degenerate_flag_parabolic(&x, &shape).unwrap());
    let x = FlagPoint::new(4, vec![1, 3], vec![span(4, &[&[1, 1, 1, 1]]), coord(4, &[1, 2, 3])]).unwrap();
    assert!(!is_degenerate_flag_parabolic(&x, &shape).unwrap());
}

#[test]
fn fixed_points_are_r_points() {
    for n in 2..=5 {
        for c in enumerate_admissible(n).unwrap() {
            let p = fixed_point(&c).unwrap();
            assert!(is_r_point(&p), "{c}");
            let x = project_pi(&p).unwrap();
            assert!(is_degenerate_flag(&x).unwrap());
            for (k, v) in x.spaces.iter().enumerate() {
                assert_eq!(*v, Subspace::coordinate(c.at(k + 1, k + 1).unwrap()));
            }
            assert_eq!(cell_labels(&p), c);
        }
    }
    let bad = Collection::from_slots(3, &[(1, 1, &[3]), (1, 2, &[1]), (2, 2, &[1, 2])]).unwrap();
    assert!(matches!(fixed_point(&bad), Err(Error::Precondition(_))));
}

#[test]
fn r_point_counterexample() {
    let c = Collection::from_slots(3, &[(1, 1, &[1]), (1, 2, &[1]), (2, 2, &[1, 2])]).unwrap();
    let mut p = fixed_point(&c).unwrap();
    assert!(is_r_point(&p));
    // V_{1,1} = span(w_1 + w_3) is not inside V_{1,2} + span(w_2)
    p.set(1, 1, span(3, &[&[1, 0, 1]]));
    assert!(!is_r_point(&p));
    let mut p2 = fixed_point(&c).unwrap();
    p2.spaces.remove(&RootIndex::new(1, 2));
    assert!(!is_r_point(&p2));
    assert!(is_partial_r_point(&p2));
}

#[test]
fn lift_examples() {
    for n in 2..=5 {
        let x = FlagPoint::coordinate(n, (1..n).collect());
        let p = lift(&x).unwrap();
        for (r, v) in &p.spaces {
            assert_eq!(*v, coord(n, &(1..=r.i).collect::<Vec<_>>()));
        }
    }
    let x = flag(3, vec![coord(3, &[2]), coord(3, &[1, 3])]);
    let p = lift(&x).unwrap();
    assert_eq!(p.get(1, 2).unwrap(), &coord(3, &[1]));
    let bad = flag(3, vec![coord(3, &[1]), coord(3, &[2, 3])]);
    assert!(matches!(lift(&bad), Err(Error::Precondition(_))));
}

#[test]
fn generic_lift_is_iterated_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 3..=5 {
        let mut seen = 0;
        for _ in 0..50 {
            let x = random_flag(n, &mut rng).unwrap();
            let injective = (1..n).all(|i| (i..n).all(|j| x.spaces[i - 1].kill(IndexSet::interval(n, i + 1, j)).dim() == i));
            if !injective {
                continue;
            }
            seen += 1;
            let p = lift(&x).unwrap();
            for i in 1..n {
                for j in i..n {
                    assert_eq!(*p.get(i, j).unwrap(), x.spaces[i - 1].kill(IndexSet::interval(n, i + 1, j)));
                }
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn lift_round_trip_and_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=5 {
        for _ in 0..40 {
            let x = random_flag(n, &mut rng).unwrap();
            assert!(is_degenerate_flag(&x).unwrap());
            let p = lift(&x).unwrap();
            assert!(is_r_point(&p));
            assert_eq!(project_pi(&p).unwrap(), x);
            let c = cell_labels(&p);
            assert!(is_admissible(&c).unwrap(), "{c}");
        }
    }
}

#[test]
fn random_points_have_admissible_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=5 {
        for _ in 0..40 {
            let p = random_r_point(n, &mut rng).unwrap();
            assert!(is_r_point(&p));
            assert!(is_admissible(&cell_labels(&p)).unwrap());
        }
    }
}

#[test]
fn cell_label_examples() {
    let r = RootIndex::new(1, 1);
    assert_eq!(cell_label(&span(2, &[&[1, 5]]), r), set(2, &[1]));
    assert_eq!(cell_label(&span(2, &[&[0, 1]]), r), set(2, &[2]));
    assert_eq!(cell_label(&coord(4, &[1, 4]), RootIndex::new(2, 2)), set(4, &[1, 4]));
}

#[test]
fn section_examples() {
    let n = 4;
    let s1 = section_s(1, &RPoint::empty(n)).unwrap();
    assert_eq!(s1.get(1, 3).unwrap(), &coord(n, &[4]));
    let c = Collection::from_slots(n, &[(1, 3, &[1]), (1, 2, &[1]), (2, 3, &[1, 2]), (1, 1, &[1]), (2, 2, &[1, 2]), (3, 3, &[1, 2, 3])]).unwrap();
    let p = fixed_point(&c).unwrap();
    assert_eq!(section_value(&p, RootIndex::new(2, 3)).unwrap(), coord(n, &[1, 4]));
    assert_eq!(section_value(&p, RootIndex::new(3, 3)).unwrap(), coord(n, &[1, 2, 4]));
    assert_eq!(section_value(&p, RootIndex::new(2, 2)).unwrap(), coord(n, &[1, 3]));
    assert_eq!(section_value(&p, RootIndex::new(1, 2)).unwrap(), coord(n, &[3]));
    assert!(!z_divisor_membership(&p, RootIndex::new(1, 3)).unwrap());
    assert!(z_divisors(&p).unwrap().is_empty());
    assert!(section_s(3, &RPoint::empty(n)).is_err());
}

#[test]
fn section_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 2..=5 {
        let order = crate::combinatorics::beta_order(n).unwrap().order;
        for _ in 0..30 {
            let full = random_r_point(n, &mut rng).unwrap();
            for l in 1..=order.len() {
                let p = full.restrict(&order[..l - 1]);
                let s = section_s(l, &p).unwrap();
                assert!(is_partial_r_point(&s));
                assert_eq!(s.forget(order[l - 1]), p);
                assert!(z_divisor_membership(&s, order[l - 1]).unwrap());
            }
        }
    }
}

#[test]
fn divisors_at_fixed_points() {
    for n in 2..=5 {
        for c in enumerate_admissible(n).unwrap() {
            let p = fixed_point(&c).unwrap();
            assert_eq!(z_divisors(&p).unwrap(), fixed_point_divisors(&c).unwrap(), "{c}");
        }
        for cell in codim_one_cells(n).unwrap() {
            let p = fixed_point(&cell.cell).unwrap();
            assert_eq!(z_divisors(&p).unwrap(), fixed_point_divisors(&cell.cell).unwrap());
        }
        let top = fixed_point(&enumerate_admissible(n).unwrap().next().unwrap()).unwrap();
        assert!(!z_divisor_membership(&top, RootIndex::new(1, n - 1)).unwrap());
    }
}

#[test]
fn generic_points_avoid_divisors_and_lift_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=5 {
        for _ in 0..20 {
            let p = random_generic_r_point(n, &mut rng).unwrap();
            let x = project_pi(&p).unwrap();
            let l = lift(&x).unwrap();
            assert_eq!(l, p);
            assert!(z_divisors(&l).unwrap().is_empty());
        }
    }
}

#[test]
fn quiver_examples() {
    for n in 2..=5 {
        let x = FlagPoint::coordinate(n, (1..n).collect());
        let p = quiver_from_flag(&x).unwrap();
        assert!(is_quiver_point(&p).unwrap());
        assert!(p.is_open());
        for (l, b) in p.b.iter().enumerate() {
            // coordinate inclusion C^{i} -> C^{i+1}
            for r in 0..b.nrows() {
                for c in 0..b.ncols() {
                    assert_eq!(b[(r, c)], q((r == c) as i64), "B_{}", l + 1);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=5 {
        for _ in 0..20 {
            let x = random_flag(n, &mut rng).unwrap();
            let p = quiver_from_flag(&x).unwrap();
            assert!(is_quiver_point(&p).unwrap());
            for (a, v) in p.a.iter().zip(&x.spaces) {
                assert_eq!(Subspace::from_matrix(a.transpose()), *v);
            }
        }
    }
    let mut p = quiver_from_flag(&FlagPoint::coordinate(3, vec![1, 2])).unwrap();
    p.b[0][(1, 0)] = q(1);
    assert!(!is_quiver_point(&p).unwrap());
    p.b.clear();
    assert!(is_quiver_point(&p).is_err());
}

#[test]
fn quiver_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=5 {
        let shape = ParabolicShape::full(n).unwrap();
        let rep = quiver_dimension_check(&shape, 5, &mut rng).unwrap();
        let expected = n * (n - 1) / 2 + (1..n).map(|i| i * i).sum::<usize>();
        assert_eq!(rep.expected_dimension, expected);
        assert_eq!(rep.equations, (1..n - 1).map(|i| n * i).sum::<usize>());
        assert!(rep.full_rank, "{rep:?}");
        assert_eq!(rep.dimension, Some(expected));
    }
    let rep = quiver_dimension_check(&ParabolicShape::full(3).unwrap(), 1, &mut rng).unwrap();
    assert_eq!(rep.dimension, Some(8));
}

#[test]
fn quiver_rank_drops_at_the_singular_point() {
    // The 0-cell of Fl^a_3 labelled (2), (1,3) is its singular point.
    let x = FlagPoint::new(3, vec![1, 2], vec![coord(3, &[2]), coord(3, &[1, 3])]).unwrap();
    let p = quiver_from_flag(&x).unwrap();
    assert!(is_quiver_point(&p).unwrap() && p.is_open());
    assert_eq!(quiver_jacobian_rank(&p).unwrap(), 2);
    let top = quiver_from_flag(&FlagPoint::coordinate(3, vec![1, 2])).unwrap();
    assert_eq!(quiver_jacobian_rank(&top).unwrap(), 3);
}

#[test]
fn parabolic_quiver_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (n, d) in [(3, vec![1]), (4, vec![1, 3]), (4, vec![2]), (5, vec![1, 3]), (5, vec![2, 3, 4])] {
        let shape = ParabolicShape::new(n, d).unwrap();
        let rep = quiver_dimension_check(&shape, 5, &mut rng).unwrap();
        assert!(rep.full_rank, "{rep:?}");
        assert_eq!(rep.dimension, Some(rep.expected_dimension), "{rep:?}");
    }
}

fn y_from_r(p: &RPoint, shape: &ParabolicShape) -> YPoint {
    let d = &shape.d;
    let mut spaces = std::collections::BTreeMap::new();
    for a in 1..=d.len() {
        for b in a..=d.len() {
            spaces.insert((a, b), p.get(d[a - 1], d[b - 1]).unwrap().clone());
        }
    }
    YPoint { shape: shape.clone(), spaces }
}

#[test]
fn y_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=5 {
        let full = ParabolicShape::full(n).unwrap();
        for _ in 0..20 {
            let mut p = random_r_point(n, &mut rng).unwrap();
            assert!(is_y_point(&y_from_r(&p, &full)).unwrap());
            // corrupt one slot inside its ambient
            let r = RootIndex::new(1, n - 1);
            p.set(1, n - 1, Subspace::coordinate(slot_support(n, 1, n - 1)).kill(IndexSet::new(n, &[n]).unwrap()));
            assert_eq!(is_y_point(&y_from_r(&p, &full)).unwrap(), is_r_point(&p), "{r}");
        }
        for c in enumerate_admissible(n).unwrap().take(8) {
            assert!(is_y_point(&y_from_r(&fixed_point(&c).unwrap(), &full)).unwrap());
        }
    }
    for (n, d) in [(4, vec![1, 3]), (5, vec![2, 4]), (5, vec![1, 2, 4])] {
        let shape = ParabolicShape::new(n, d).unwrap();
        for _ in 0..20 {
            let p = lift(&random_flag(n, &mut rng).unwrap()).unwrap();
            assert!(is_y_point(&y_from_r(&p, &shape)).unwrap());
        }
    }
}

#[test]
fn y_point_structural_errors() {
    let shape = ParabolicShape::new(3, vec![1]).unwrap();
    let y = YPoint { shape: shape.clone(), spaces: Default::default() };
    assert!(is_y_point(&y).is_err());
    let mut spaces = std::collections::BTreeMap::new();
    spaces.insert((1, 1), coord(3, &[1, 2]));
    assert!(matches!(is_y_point(&YPoint { shape, spaces }), Err(Error::Malformed { .. })));
}

#[test]
fn tangent_matches_cell_rules() {
    for n in 2..=5 {
        for c in enumerate_admissible(n).unwrap() {
            let t = tangent_dimensions(&c, None).unwrap();
            assert_eq!(t.tangent, num_roots(n), "{c}");
            assert_eq!(t.positive as u32, cell_dimension(&c).unwrap(), "{c}");
            assert_eq!(t.relative as u32, relative_dimension(&c).unwrap(), "{c}");
        }
    }
}

#[test]
fn parabolic_tangent_gives_binomial_poincare() {
    for n in 2..=5 {
        for mask in 1u32..(1 << (n - 1)) {
            let d: Vec<usize> = (1..n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            let shape = ParabolicShape::new(n, d).unwrap();
            let m = shape.roots().len();
            let mut poly = vec![0u64; m + 1];
            for c in enumerate_admissible_parabolic(&shape).unwrap() {
                assert!(is_admissible_parabolic(&c, &shape).unwrap());
                let t = tangent_dimensions(&c, Some(&shape)).unwrap();
                assert_eq!(t.tangent, m, "{c}");
                poly[t.positive] += 1;
            }
            assert_eq!(poly, crate::combinatorics::binomial_row(m), "shape {:?}", shape.d);
        }
    }
}
