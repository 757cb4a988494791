use proptest::prelude::*;

use aemfp::io::{parse_instance, parse_instance_with_warnings, write_instance};
use aemfp::oracles::{generate_random, generate_x3c_gadget, DeviationKind, RandomParams, X3CInstance};

#[test]
fn x3c_gadget_round_trip() {
    let (inst, _) = generate_x3c_gadget(&X3CInstance::new(3, vec![[0, 1, 2]]).unwrap()).unwrap();
    assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
}

#[test]
fn x3c_text_round_trip() {
    let x = X3CInstance::parse("6 3\n1 2 3\n4 5 6\n2 3 4\n").unwrap();
    assert_eq!(X3CInstance::parse(&x.to_text()).unwrap(), x);
    assert!(x.has_exact_cover());
}

#[test]
fn shared_edge_keeps_set_count() {
    let text = "p aemfp 3 2 2\nn 0 s\nn 2 t\na 0 0 1 5\na 1 1 2 5\nh 0 const 1 0 1\nh 1 const 2 1\n";
    let (inst, warnings) = parse_instance_with_warnings(text).unwrap();
    assert_eq!(inst.set_count(), 2);
    assert_eq!(warnings.len(), 1);
    assert_eq!(inst.graph().edge_count(), 3);
}

proptest! {
    #[test]
    fn random_round_trip(seed in any::<u64>(), n in 2usize..9, m in 1usize..13, k in 0usize..3, concave in any::<bool>()) {
        let deviation = if concave && k == 1 { DeviationKind::ConcaveMix } else { DeviationKind::Constant { max_shift: 3 } };
        let inst = generate_random(&RandomParams { n, m: m.max(k), k, cap_max: 5, deviation, seed }).unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }
}
