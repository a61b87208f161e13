mod common;

use common::bin;

fn code_and_stdout(args: &[&str]) -> (i32, String) {
    let o = bin(args);
    (o.status.code().expect("exit code"), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn documented_examples() {
    let (code, out) = code_and_stdout(&["coeffs", "1/(1-x1*x2)"]);
    assert_eq!(code, 0);
    assert_eq!(out, "a0 = 0\na2 = 1\n");
    assert_eq!(code_and_stdout(&["periods", "--verify-n", "6"]).0, 0);
    assert_eq!(code_and_stdout(&["coeffs", "1/(1-x1*x2)^2"]).0, 2);
}

#[test]
fn parse_and_usage_errors_exit_1() {
    for args in [
        vec!["coeffs", "x1 + /"],
        vec!["coeffs", "1/(1+x1*x2)"],
        vec!["coeffs", "1/(1-x1*x3)"],
        vec!["coeffs"],
        vec!["nonsense"],
        vec!["ballrivoal", "--u", "1,2", "--v", "1", "--N", "2"],
        vec!["ballrivoal", "--u", "0,1", "--v", "1,1", "--N", "2"],
        vec!["eulerian"],
        vec!["periods", "--verify-n", "0"],
        vec!["check", "1/(1-x1*x2)", "--claim", "1"],
        vec!["scan", "--n", "2", "--max-N", "0"],
    ] {
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty(), "{args:?} should explain itself");
    }
    let o = bin(&["coeffs", "x1 +\n  / x2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:3"));
}

#[test]
fn integrability_exit_codes() {
    let (code, out) = code_and_stdout(&["integrable", "x1*x2*(1-x1)*(1-x2)/(1-x1*x2)^2"]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (code, out) = code_and_stdout(&["integrable", "1/(1-x1*x2)^2"]);
    assert_eq!((code, out.as_str()), (2, "false\n"));
    assert_eq!(code_and_stdout(&["check", "1/(1-x1*x2)^2"]).0, 2);
    assert_eq!(code_and_stdout(&["ballrivoal", "--u", "1,1", "--v", "1,1", "--N", "3"]).0, 2);
}

#[test]
fn verification_exit_codes() {
    let beukers = "x1*x2*(1-x1)*(1-x2)/(1-x1*x2)^2";
    let (code, out) = code_and_stdout(&["check", beukers, "--K", "20000", "--digits", "20"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("PASS"));
    let (code, out) = code_and_stdout(&["check", beukers, "--K", "20000", "--digits", "20", "--claim", "5,-2"]);
    assert_eq!(code, 3);
    assert!(out.trim_end().ends_with("FAIL"));
    assert_eq!(code_and_stdout(&["check", beukers, "--K", "20000", "--claim", "5,-3"]).0, 0);
    let (code, out) =
        code_and_stdout(&["ballrivoal", "--u", "2,2", "--v", "2,2", "--N", "2", "--check", "--K", "20000", "--digits", "20"]);
    assert_eq!(code, 0);
    assert!(out.contains("a0 = 5\na2 = -3\n"));
}

#[test]
fn tau_and_eulerian_text() {
    // well-poised: (n+1)(N+1) odd gives plus, even gives minus
    let (code, out) = code_and_stdout(&["tau", "x1*x2/(1-x1*x2)^4"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("symmetry: plus\n"), "{out}");
    let (_, out) = code_and_stdout(&["tau", "(1-x1)*(1-x2)*(1-x3)/(1-x1*x2*x3)^3"]);
    assert!(out.ends_with("symmetry: minus\n"), "{out}");
    let (_, out) = code_and_stdout(&["tau", "x1*(1-x1)*x2*(1-x2)/(1-x1*x2)^2"]);
    assert!(out.ends_with("symmetry: none\n"), "{out}");
    let (code, out) = code_and_stdout(&["eulerian", "--r", "4"]);
    assert_eq!((code, out.as_str()), (0, "E_4(x) = x^3 + 11*x^2 + 11*x + 1\n"));
    let (_, out) = code_and_stdout(&["eulerian", "--table", "3"]);
    assert_eq!(out, "0: 1\n1: 1\n2: 1 1\n3: 1 4 1\n");
    let (_, out) = code_and_stdout(&["coeffs", "-x1/(1-x1*x2)"]);
    assert_eq!(out, "a0 = -1\na2 = 0\n");
}

#[test]
fn help_exits_0() {
    assert_eq!(code_and_stdout(&["--help"]).0, 0);
    assert_eq!(code_and_stdout(&["scan", "--help"]).0, 0);
}
