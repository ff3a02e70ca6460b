//! Runs `compute` and `sweep` on TOML documents, as the command-line tool does.

use iwasawa::cli::{run, Command, RunConfig};

const MODULE: &str = r#"
schema_version = 1

[module]
prime = 3
r = 1
constructor = "cyclic"
f = "T1^2 + p"

[run]
law = "elementary"
m_max = 3
"#;

const TOWER: &str = r#"
schema_version = 1

[module]
prime = 3
r = 1
constructor = "free"
rank = 1

[tower]
rho = [[4]]
phi = [["1"]]
n_max = 2
m_max = 2
"#;

fn main() {
    let dir = std::env::temp_dir().join("iwasawa-spec-document");
    for (name, text, command) in [("module.toml", MODULE, Command::Verify), ("tower.toml", TOWER, Command::Sweep)] {
        let input = dir.join(name);
        std::fs::create_dir_all(&dir).expect("temp dir");
        std::fs::write(&input, text).expect("write spec");
        let mut config = RunConfig::new(command, dir.join("out"));
        config.input = Some(input);
        let outcome = run(&config);
        println!("{name}: exit {}", outcome.code);
        print!("{}", outcome.summary);
        for a in &outcome.artifacts {
            println!("  wrote {}", a.display());
        }
    }
}
