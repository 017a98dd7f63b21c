//! Every example under `examples/` runs to completion.

macro_rules! example {
    ($test:ident, $module:ident, $file:literal) => {
        #[allow(dead_code)]
        #[path = $file]
        mod $module;

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(spectral_fields_runs, spectral_fields, "../examples/spectral_fields.rs");
example!(heat_smoothing_runs, heat_smoothing, "../examples/heat_smoothing.rs");
example!(parabolicity_runs, parabolicity, "../examples/parabolicity.rs");
example!(mild_solution_runs, mild_solution, "../examples/mild_solution.rs");
example!(nonlocal_problem_runs, nonlocal_problem, "../examples/nonlocal_problem.rs");
example!(gradient_problem_runs, gradient_problem, "../examples/gradient_problem.rs");
example!(navier_stokes_runs, navier_stokes, "../examples/navier_stokes.rs");
example!(cli_reports_runs, cli_reports, "../examples/cli_reports.rs");
