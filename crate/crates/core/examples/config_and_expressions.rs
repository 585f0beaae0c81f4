//! Builds a problem from a config string with inline expressions and runs
//! the probes it names.

use fracdiff::cli::run_probes;
use fracdiff::{Expr, RunConfig};

fn main() {
    let e = Expr::parse("1 - abs(2*x - 1) + 0.1*sin(pi*t)").expect("valid expression");
    println!("parsed: {e}\nat (0.25, 0.5): {}", e.eval(0.25, 0.5));

    let cfg: RunConfig = "
        problem.alpha = 0.4
        problem.boundary = x * (1 - x)
        problem.source = -1
        grid.n_cells = 64
        probes = max_principle, contraction, rl_limit
        probe.max_principle.field = -(x - 0.3)^2
        probe.contraction.source = -2
    "
    .parse()
    .expect("valid config");
    for report in run_probes(&cfg).expect("probes run") {
        println!("{}: {}", report.name, if report.passed() { "pass" } else { "fail" });
    }
}
