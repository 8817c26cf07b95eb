//! Browser front end: the page passes a `gdh` command line and shows the
//! output. Everything runs in-process; the disk cache is never used.

use wasm_bindgen::prelude::*;

/// Runs one `gdh` command. `Ok` carries stdout, `Err` stderr.
pub fn run_line(line: &str) -> Result<String, String> {
    let argv = std::iter::once("gdh").chain(line.split_whitespace().filter(|a| !a.starts_with("--cache")));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = gdh_core::cli::run(argv, &mut out, &mut err);
    let (out, err) = (String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned());
    if code == 0 {
        Ok(out)
    } else {
        Err(err)
    }
}

#[wasm_bindgen]
pub fn run(line: &str) -> Result<String, JsValue> {
    run_line(line).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boussinesq() {
        assert_eq!(run_line("gd --n 3 --indices 2,2").unwrap(), "d2^2 v = -1/3 d1^4 v + 2 (d1^2 v)^2\n");
        assert!(run_line("gd --n 1 --indices 2,2").unwrap_err().contains("--n"));
    }
}
