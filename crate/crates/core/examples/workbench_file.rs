//! Loads a workbench document and drives the command surface in-process.

use std::io;

use testability::cli::{parse_str, run};

const DOC: &str = r#"{
  "model": {
    "elements": ["bot", "lo", "hi", "top"],
    "order": [["bot", "lo"], ["lo", "hi"], ["hi", "top"]],
    "bot": "bot",
    "top": "top"
  },
  "requirements": { "small": ["bot", "lo"] },
  "setups": { "refl": { "builtin": "reflexive" } }
}"#;

fn main() {
    let wb = parse_str(DOC, "inline.json".as_ref()).unwrap();
    println!("{} with {} systems", wb.universe_label(), wb.model.len());

    let dir = std::env::temp_dir().join("testability-workbench-example.json");
    std::fs::write(&dir, DOC).unwrap();
    let file = dir.to_str().unwrap();
    for args in [
        vec!["classify", "--file", file, "--req", "small"],
        vec![
            "refutable",
            "--file",
            file,
            "--req",
            "small",
            "--setup",
            "refl",
        ],
        vec![
            "verifiable",
            "--file",
            file,
            "--req",
            "small",
            "--setup",
            "refl",
        ],
    ] {
        let argv = std::iter::once("testability").chain(args.iter().copied());
        let code = run(argv, &mut io::stdout(), &mut io::stderr());
        println!("exit={code}\n");
    }
}
