//! Every degree of a subgroup divides into the ambient group's degrees:
//! restricting an ambient irreducible splits into at most [G : H] pieces,
//! so subgroup degrees lie among bounded sums of ambient degrees.

use repzeta_core::chartab::{ClassAlgebra, DimensionMultiset};
use repzeta_core::groups::{conjugacy_classes, enumerate_group, GroupSpec, Scheme};
use repzeta_core::rings::RingDesc;
use repzeta_core::zetatool::sigma_set;
use repzeta_core::Budgets;

fn degrees(scheme: Scheme, n: usize) -> DimensionMultiset {
    let spec = GroupSpec::new(scheme, n, RingDesc::field(3, 1).unwrap()).unwrap();
    let budgets = Budgets::default();
    let group = enumerate_group(&spec, &budgets).unwrap();
    let data = conjugacy_classes(group, &budgets).unwrap();
    ClassAlgebra::new(&data, &budgets).dixon_degrees().unwrap()
}

fn check_pair(ambient: &DimensionMultiset, sub: &DimensionMultiset) {
    let budgets = Budgets::default();
    assert_eq!(ambient.order % sub.order, 0);
    let index = (ambient.order / sub.order) as u32;
    let sums = sigma_set(&ambient.distinct_degrees(), index, &budgets).unwrap();
    for d in sub.distinct_degrees() {
        assert!(sums.contains(&d), "subgroup degree {d} not reachable");
    }
}

#[test]
fn subgroup_degrees_are_bounded_sums_of_ambient_degrees() {
    let gl2 = degrees(Scheme::Gl, 2);
    let sl2 = degrees(Scheme::Sl, 2);
    assert_eq!(gl2.order / sl2.order, 2);
    check_pair(&gl2, &sl2);

    let u4 = degrees(Scheme::UpperUni, 4);
    let u3 = degrees(Scheme::UpperUni, 3);
    assert_eq!(u4.order / u3.order, 27);
    check_pair(&u4, &u3);
}
