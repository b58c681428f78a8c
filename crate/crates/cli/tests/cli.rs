use std::process::{Command, Output};

use picubed::{catalog_entries, run, CSV_HEADER};

const BIN: &str = env!("CARGO_BIN_EXE_picubed");

fn picubed(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove(picubed::BUDGET_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Run in-process and capture (exit code, stdout, stderr).
fn run_captured(args: &[&str], budget: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["picubed"];
    full.extend_from_slice(args);
    let code = run(full, budget, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn value_line(s: &str) -> String {
    s.lines()
        .find_map(|l| l.strip_prefix("value: "))
        .expect("value line")
        .to_string()
}

#[test]
fn eval_golden_fifth() {
    let o = picubed(&["eval", "--series", "golden-fifth", "--digits", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_line(&stdout(&o)), "31.0062766803");
    assert!(stderr(&o).is_empty());
}

#[test]
fn eval_degenerate_abscissa() {
    let o = picubed(&["eval", "--x", "1/2", "--digits", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degenerate abscissa x=1/2"));
}

#[test]
fn eval_over_budget_names_fast_series() {
    let o = picubed(&["eval", "--series", "golden-fifth", "--digits", "40"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("central-binomial"));
}

#[test]
fn eval_general_abscissa() {
    let (code, out, err) = run_captured(&["eval", "--x", "1/15", "--digits", "10"], None);
    assert_eq!(code, 0, "{err}");
    assert_eq!(value_line(&out), "31.00627668");
    let (code, _, _) = run_captured(&["eval", "--x", "3/2", "--digits", "10"], None);
    assert_eq!(code, 1);
}

#[test]
fn eval_precision_override() {
    let (code, _, err) = run_captured(
        &["eval", "--series", "quarter", "--digits", "10", "--precision", "12"],
        None,
    );
    assert_eq!(code, 1);
    assert!(err.contains("required"), "{err}");
    let (code, out, _) = run_captured(
        &["eval", "--series", "quarter", "--digits", "10", "--precision", "30"],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(value_line(&out), "31.00627668");
}

#[test]
fn more_digits_keep_the_leading_digits() {
    for (series, d) in [("central-binomial", 10usize), ("quarter", 3), ("sun-harmonic", 12)] {
        let ds = d.to_string();
        let hi = (d + 10).to_string();
        let (_, low, _) = run_captured(&["eval", "--series", series, "--digits", &ds], None);
        let (_, high, _) = run_captured(&["eval", "--series", series, "--digits", &hi], None);
        let low = value_line(&low);
        let high = value_line(&high);
        assert_eq!(low, round_decimal(&high, d), "{series}");
    }
}

/// Round a positive fixed-notation decimal string to `n` significant digits.
fn round_decimal(s: &str, n: usize) -> String {
    let point = s.find('.').unwrap_or(s.len());
    let mut digits: Vec<u8> = s.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    let lead = digits.iter().position(|&d| d != 0).unwrap();
    let cut = lead + n;
    let up = digits.get(cut).is_some_and(|&d| d >= 5);
    digits.truncate(cut);
    let mut int_len = point;
    if up {
        let mut i = cut;
        loop {
            if i == 0 {
                digits.insert(0, 1);
                int_len += 1;
                digits.pop();
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let text: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
    if text.len() <= int_len {
        text
    } else {
        format!("{}.{}", &text[..int_len], &text[int_len..])
    }
}

#[test]
fn round_decimal_helper() {
    assert_eq!(round_decimal("31.00627668", 4), "31.01");
    assert_eq!(round_decimal("9.996", 3), "10.0");
    assert_eq!(round_decimal("31.0062766803", 3), "31.0");
}

#[test]
fn budget_variable() {
    let (code, _, err) = run_captured(&["eval", "--series", "quarter", "--digits", "10"], Some("100"));
    assert_eq!(code, 2);
    assert!(err.contains("100"));
    let (code, _, _) = run_captured(&["eval", "--series", "quarter", "--digits", "10"], Some("zero"));
    assert_eq!(code, 1);
    let (code, _, _) = run_captured(&["eval", "--series", "quarter", "--digits", "10"], Some("0"));
    assert_eq!(code, 1);
}

#[test]
fn compare_csv_matches_golden_file() {
    let o = picubed(&["compare", "--digits", "10", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    let golden = include_str!("golden/compare_digits10.csv");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn compare_rows_sorted_and_filtered() {
    let (code, out, _) = run_captured(&["compare", "--digits", "10", "--output", "csv"], None);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    let pos = |name: &str| lines.iter().position(|l| l.starts_with(&format!("{name},"))).unwrap();
    assert!(pos("central-binomial") < pos("golden-fifth"));
    let terms: Vec<u64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert!(terms.windows(2).all(|w| w[0] <= w[1]));
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f.len(), 8);
        assert!(f[3].parse::<u32>().unwrap() >= 10);
    }

    let (code, out, _) = run_captured(
        &["compare", "--digits", "10", "--series", "quarter,golden-fifth", "--output", "csv"],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn compare_usage_and_output_errors() {
    let (code, _, _) = run_captured(&["compare", "--digits", "0"], None);
    assert_eq!(code, 1);
    let (code, _, _) = run_captured(&["compare", "--series", "nosuch"], None);
    assert_eq!(code, 1);
    let (code, _, err) = run_captured(
        &["compare", "--digits", "5", "--out", "/nonexistent-dir/x/report.csv"],
        None,
    );
    assert_eq!(code, 3, "{err}");
}

#[test]
fn compare_writes_file() {
    let dir = std::env::temp_dir().join(format!("picubed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let p = path.to_str().unwrap();
    let (code, out, err) = run_captured(
        &["compare", "--digits", "8", "--series", "central-binomial", "--output", "csv", "--out", p],
        None,
    );
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty() && err.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    assert!(!text.contains('\r'));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn compare_failed_row_reports_na_and_exit_two() {
    let (code, out, _) = run_captured(
        &["compare", "--digits", "10", "--series", "golden-fifth,central-binomial", "--output", "csv"],
        Some("500"),
    );
    assert_eq!(code, 2);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[1].starts_with("central-binomial,"));
    assert!(lines[2].starts_with("golden-fifth,pi^3,10,NA,NA,NA,NA,"));
}

#[test]
fn verify_commands() {
    let o = picubed(&["verify", "--identity", "plouffe-pi3", "--digits", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("plouffe-pi3") && stdout(&o).contains("pass"));
    assert!(o.stderr.is_empty());

    let o = picubed(&["verify", "--identity", "nosuch"]);
    assert_eq!(o.status.code(), Some(1));

    let (code, out, err) = run_captured(&["verify", "--identity", "all", "--digits", "15"], None);
    assert_eq!(code, 0, "{err}");
    assert!(err.is_empty());
    let typo = out.lines().find(|l| l.starts_with("eq1-as-printed")).unwrap();
    assert!(typo.contains("expected-fail (paper typo)"));
    assert!(typo.contains("3.20e1"));
    assert_eq!(out.lines().filter(|l| l.contains(" pass ")).count(), 12);
}

#[test]
fn verify_failure_exit_code() {
    // a budget too small for the Gupta components fails with the budget code
    let (code, _, _) = run_captured(&["verify", "--identity", "gupta-0", "--digits", "15"], Some("1000"));
    assert_eq!(code, 2);
    let (code, out, _) = run_captured(&["verify", "--identity", "eq1-as-printed"], None);
    assert_eq!(code, 0);
    assert!(out.contains("expected-fail"));
}

#[test]
fn catalog_matches_golden_file() {
    let o = picubed(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/catalog.txt"));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.contains("Eq. (16)") && l.contains("bilateral O(N^-3)")));
    assert!(text.lines().any(|l| l.contains("Eq. (9)") && l.ends_with("true")));
    assert_eq!(text.lines().count(), 1 + catalog_entries().len());
    assert_eq!(catalog_entries().len(), 9 + 9);
}

#[test]
fn help_and_bad_flags() {
    let (code, out, err) = run_captured(&["--help"], None);
    assert_eq!(code, 0);
    assert!(out.contains("eval") && err.is_empty());
    let (code, _, err) = run_captured(&["eval", "--bogus"], None);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    let (code, _, _) = run_captured(&["eval", "--series", "quarter", "--x", "1/5"], None);
    assert_eq!(code, 1);
}
