use std::time::Instant;
#[test]
fn shapiro_timing() {
    use cmtorus_core::cohomology::{tate_cohomology, GModule};
    use cmtorus_core::group::FiniteGroup;
    let groups = [
        ("Z/10".to_string(), FiniteGroup::cyclic(10)),
        ("Z/12".to_string(), FiniteGroup::cyclic(12)),
        ("Z/2xZ/6".to_string(), FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(6))),
    ];
    for (label, g) in groups {
        let m = GModule::induced_zg(g);
        for r in -2..=2i32 {
            let t0 = Instant::now();
            let h = tate_cohomology(&m, r).unwrap();
            println!("{label} r={r}: {h} in {:?}", t0.elapsed());
            assert!(h.is_trivial());
        }
    }
    let m = GModule::induced_zg(FiniteGroup::cyclic(10));
    let t0 = Instant::now();
    let h = tate_cohomology(&m, 3).unwrap();
    println!("Z/10 r=3: {h} in {:?}", t0.elapsed());
}
