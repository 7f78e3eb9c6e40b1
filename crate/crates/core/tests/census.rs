use bilin_core::bilin::factor_membership;
use bilin_core::cases222::{enumerate_222, points_over_pair, quot_points_122};
use bilin_core::exactalg::{Field, Matrix};
use bilin_core::modcore::{validate_framed, FramedModule};

#[test]
fn census_q2_all_labels_and_no_violations() {
    let c = enumerate_222(2, 1 << 20).unwrap();
    println!("{}", serde_json::to_string_pretty(&c).unwrap());
    for (label, n) in &c.by_label {
        assert!(*n > 0, "{label} has no points");
    }
    assert_eq!(c.border_rank_3, 0);
    assert!(c.violations.is_empty(), "{:?}", c.violations);
    assert!(c.nonsplit_points > 0);
}

#[test]
fn census_is_schedule_independent() {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = one.install(|| enumerate_222(2, 1 << 20).unwrap());
    let b = enumerate_222(2, 1 << 20).unwrap();
    assert_eq!(a, b);
}

/// Every valid length-2 framed module with four framing columns over F_2, one per quotient.
fn quot_targets(field: Field) -> Vec<FramedModule> {
    let mut seen = std::collections::HashSet::new();
    let e = field.elements().unwrap();
    for code in 0u32..(1 << 12) {
        let bits: Vec<_> = (0..12).map(|b| e[((code >> b) & 1) as usize].clone()).collect();
        let z = Matrix::new(field, 2, 2, bits[..4].to_vec()).unwrap();
        let f = Matrix::new(field, 2, 4, bits[4..].to_vec()).unwrap();
        let m = FramedModule::new(vec![z], f).unwrap();
        if validate_framed(&m).is_valid() {
            seen.insert(m.normal_form().unwrap());
        }
    }
    let mut v: Vec<_> = seen.into_iter().collect();
    v.sort_by_key(|m| serde_json::to_string(m).unwrap());
    v
}

#[test]
fn subspace_route_matches_membership_sweep() {
    let f2 = Field::prime(2).unwrap();
    let quot = quot_points_122(f2).unwrap();
    let targets = quot_targets(f2);
    for m1 in &quot {
        for m2 in &quot {
            let direct = points_over_pair(m1, m2).unwrap();
            let mut keys: Vec<_> = direct.iter().map(|b| b.m3().unwrap().normal_form().unwrap()).collect();
            keys.sort_by_key(|m| serde_json::to_string(m).unwrap());
            let mut swept = Vec::new();
            for t in &targets {
                let mem = factor_membership(m1, m2, t).unwrap();
                if let Some(p) = mem.point {
                    assert_eq!(mem.solution_dim, 0);
                    swept.push(p.m3().unwrap().normal_form().unwrap());
                }
            }
            swept.sort_by_key(|m| serde_json::to_string(m).unwrap());
            assert_eq!(keys, swept);
        }
    }
}
