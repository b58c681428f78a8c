use std::io;

fn main() {
    let budget = std::env::var(picubed::BUDGET_ENV).ok();
    let code = picubed::run(
        std::env::args_os(),
        budget.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
