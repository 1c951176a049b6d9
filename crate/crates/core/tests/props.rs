use hyperdiss::props::{self, PropsConfig};

#[test]
fn default_property_suites_pass() {
    let out = props::run_all(&PropsConfig::default()).unwrap();
    for o in &out {
        println!("{}: {}/{} failures, worst {:e}", o.name, o.failures, o.trials, o.worst);
    }
    assert!(out.iter().all(|o| o.passed));
}
