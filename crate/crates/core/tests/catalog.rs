use swaf::formulation::goodness;
use swaf::problems::{benchmark_catalog, BUILTIN_IDS};

#[test]
fn optimizer_points_match_known_best() {
    for p in benchmark_catalog() {
        let (Some(x), Some(best)) = (p.optimizer(), p.known_best()) else {
            panic!("{} lacks an optimizer or known best", p.name());
        };
        let gp = goodness(&p, x).unwrap();
        let f = p.reported(gp.f_obj);
        let rel = (f - best).abs() / best.abs().max(1.0);
        println!("{:<4} f={f:.7} known={best} f_con={:e}", p.name(), gp.f_con);
        assert!(rel < 1e-3, "{}: {f} vs {best}", p.name());
        assert!(gp.f_con < 1e-6, "{}: violation {}", p.name(), gp.f_con);
    }
}

#[test]
fn catalog_follows_id_order() {
    let names: Vec<String> = benchmark_catalog().iter().map(|p| p.name().to_string()).collect();
    assert_eq!(names, BUILTIN_IDS);
}
