use std::process::ExitCode;

use clap::Parser;

use goursat::app::Cli;
use goursat::report::render_text;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = goursat::run(&cli.command);
    let json = cli.command.options().json;
    match &out.generated {
        Some(p) if json => println!("{}", serde_json::to_string_pretty(p).expect("problem files serialize")),
        Some(p) => print!("{}", p.to_gsf()),
        None if json => print!("{}", out.report.to_json()),
        None => {
            print!("{}", render_text(&out.report));
            for (what, t) in &out.timings {
                println!("time {what}: {:.3} s", t.as_secs_f64());
            }
        }
    }
    ExitCode::from(out.exit_code() as u8)
}
