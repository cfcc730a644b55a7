//! Every example under `examples/` runs to completion.

#[allow(dead_code)]
#[path = "../examples/support_functions.rs"]
mod support_functions_example;

#[test]
fn support_functions_example_runs() {
    support_functions_example::run_example().expect("support_functions example should run");
}

#[allow(dead_code)]
#[path = "../examples/polytopes.rs"]
mod polytopes_example;

#[test]
fn polytopes_example_runs() {
    polytopes_example::run_example().expect("polytopes example should run");
}

#[allow(dead_code)]
#[path = "../examples/measures.rs"]
mod measures_example;

#[test]
fn measures_example_runs() {
    measures_example::run_example().expect("measures example should run");
}

#[allow(dead_code)]
#[path = "../examples/grassmann.rs"]
mod grassmann_example;

#[test]
fn grassmann_example_runs() {
    grassmann_example::run_example().expect("grassmann example should run");
}

#[allow(dead_code)]
#[path = "../examples/quermassintegrals.rs"]
mod quermassintegrals_example;

#[test]
fn quermassintegrals_example_runs() {
    quermassintegrals_example::run_example().expect("quermassintegrals example should run");
}

#[allow(dead_code)]
#[path = "../examples/mixed_volumes.rs"]
mod mixed_volumes_example;

#[test]
fn mixed_volumes_example_runs() {
    mixed_volumes_example::run_example().expect("mixed_volumes example should run");
}

#[allow(dead_code)]
#[path = "../examples/isotropic_constant.rs"]
mod isotropic_constant_example;

#[test]
fn isotropic_constant_example_runs() {
    isotropic_constant_example::run_example().expect("isotropic_constant example should run");
}

#[allow(dead_code)]
#[path = "../examples/capacity.rs"]
mod capacity_example;

#[test]
fn capacity_example_runs() {
    capacity_example::run_example().expect("capacity example should run");
}

#[allow(dead_code)]
#[path = "../examples/projection_bodies.rs"]
mod projection_bodies_example;

#[test]
fn projection_bodies_example_runs() {
    projection_bodies_example::run_example().expect("projection_bodies example should run");
}

#[allow(dead_code)]
#[path = "../examples/firey_inequality.rs"]
mod firey_inequality_example;

#[test]
fn firey_inequality_example_runs() {
    firey_inequality_example::run_example().expect("firey_inequality example should run");
}

#[allow(dead_code)]
#[path = "../examples/concavity_curve.rs"]
mod concavity_curve_example;

#[test]
fn concavity_curve_example_runs() {
    concavity_curve_example::run_example().expect("concavity_curve example should run");
}

#[allow(dead_code)]
#[path = "../examples/width_dichotomy.rs"]
mod width_dichotomy_example;

#[test]
fn width_dichotomy_example_runs() {
    width_dichotomy_example::run_example().expect("width_dichotomy example should run");
}

#[allow(dead_code)]
#[path = "../examples/pinf_limit.rs"]
mod pinf_limit_example;

#[test]
fn pinf_limit_example_runs() {
    pinf_limit_example::run_example().expect("pinf_limit example should run");
}

#[allow(dead_code)]
#[path = "../examples/equality_cases.rs"]
mod equality_cases_example;

#[test]
fn equality_cases_example_runs() {
    equality_cases_example::run_example().expect("equality_cases example should run");
}

#[allow(dead_code)]
#[path = "../examples/run_report.rs"]
mod run_report_example;

#[test]
fn run_report_example_runs() {
    run_report_example::run_example().expect("run_report example should run");
}
