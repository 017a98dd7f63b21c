//! Driving the command-line front end from code and reading back its CSV.

use parascale::cli::run_with;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("parascale-cli-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let config = dir.join("exponents.toml");
    std::fs::write(&config, "[exponents]\nphi = 0.5\nalpha = 0.4\ngamma = 2.0\noptimize_mu = true\n")?;

    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let code = run_with(
        ["parascale", "check-parabolicity", "--config", config.to_str().unwrap(), "--format", "csv"],
        &mut stdout,
        &mut stderr,
    );
    println!("exit code {code}");
    print!("{}", String::from_utf8(stdout)?);

    let out = dir.join("certificate.csv");
    let code = run_with(
        ["parascale", "certificate", "--format", "csv", "--out", out.to_str().unwrap()],
        &mut Vec::new(),
        &mut Vec::new(),
    );
    println!("\ncertificate exit code {code}");
    print!("{}", std::fs::read_to_string(&out)?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
