use std::collections::HashMap;
use std::fs;
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn keys(&self) -> HashMap<String, String> {
        self.stdout
            .lines()
            .filter_map(|l| l.split_once(": "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn key(&self, k: &str) -> String {
        self.keys().remove(k).unwrap_or_else(|| panic!("no {k} in\n{}\n{}", self.stdout, self.stderr))
    }
}

fn mecs(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_mecs")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn out_path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

const K3: &str = "0 1\n1 2\n0 2\n";
const K4: &str = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn apl_of_karate_rounds_to_two_forty_one() {
    let r = mecs(&["apl", "karate"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.key("nodes"), "34");
    assert_eq!(r.key("edges"), "78");
    let mu: f64 = r.key("apl_decimal").parse().unwrap();
    assert_eq!(format!("{mu:.2}"), "2.41");
    assert_eq!(r.key("diameter"), "5");
}

#[test]
fn apl_of_small_files() {
    let dir = TempDir::new().unwrap();
    let p3 = file(&dir, "p3", "0 1\n1 2\n");
    let r = mecs(&["apl", &p3]);
    assert_eq!(r.key("apl"), "4/3");
    assert_eq!(r.key("apl_decimal"), "1.333333");
    let split = file(&dir, "split", "# nodes: 4\n0 1\n2 3\n");
    let r = mecs(&["apl", &split]);
    assert_eq!(r.code, 0);
    assert_eq!(r.key("apl"), "infinite");
    assert_eq!(r.key("connected"), "false");
    assert_eq!(r.key("diameter"), "infinite");
}

#[test]
fn unreadable_input_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad", "0 1\n1 x\n");
    assert_eq!(mecs(&["apl", &bad]).code, 2);
    assert_eq!(mecs(&["apl", &out_path(&dir, "missing")]).code, 2);
    let looped = file(&dir, "loop", "0 0\n");
    assert_eq!(mecs(&["apl", &looped]).code, 2);
}

#[test]
fn karate_removal_at_increment_two_is_a_tree() {
    let r = mecs(&["sparsify", "--algo", "removal", "--increment", "2", "karate"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.key("result_edges"), "33");
    assert_eq!(r.key("feasible"), "true");
}

#[test]
fn karate_greedy_spanner_keeps_everything() {
    let r = mecs(&["sparsify", "--algo", "greedy-spanner", "--increment", "0.3", "karate"]);
    assert_eq!(r.key("result_edges"), "78");
}

#[test]
fn rational_targets_are_exact() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3", K3);
    let r = mecs(&["sparsify", "--algo", "addition", "--target-apl", "4/3", &k3]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.key("result_edges"), "2");
    assert_eq!(r.key("result_apl"), "4/3");
    // 1.3333 is just below 4/3, so a path no longer fits
    let r = mecs(&["sparsify", "--algo", "addition", "--target-apl", "1.3333", &k3]);
    assert_eq!(r.key("result_edges"), "3");
}

#[test]
fn target_options_are_exclusive_and_required() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3", K3);
    assert_eq!(mecs(&["sparsify", "--algo", "removal", &k3]).code, 2);
    assert_eq!(mecs(&["sparsify", "--algo", "removal", "--increment", "1", "--stretch", "2", &k3]).code, 2);
    assert_eq!(mecs(&["sparsify", "--algo", "nope", "--increment", "1", &k3]).code, 2);
    assert_eq!(mecs(&["sparsify", "--algo", "removal", "--increment", "1/0", &k3]).code, 2);
    assert_eq!(mecs(&["sparsify", "--algo", "removal", "--stretch", "0.5", &k3]).code, 2);
}

#[test]
fn bound_below_the_input_is_an_infeasible_target() {
    let dir = TempDir::new().unwrap();
    let p3 = file(&dir, "p3", "0 1\n1 2\n");
    let r = mecs(&["sparsify", "--algo", "removal", "--target-apl", "1", &p3]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(!r.stderr.is_empty());
}

#[test]
fn reports_are_rederivable_by_verify() {
    let dir = TempDir::new().unwrap();
    let graph = out_path(&dir, "g.txt");
    assert_eq!(mecs(&["gen", "random", "--n", "12", "--m", "30", "--seed", "5", "-o", &graph]).code, 0);
    for algo in ["greedy-spanner", "removal", "addition", "addition-opt"] {
        for target in [["--increment", "0.4"], ["--stretch", "1.2"]] {
            let spanner = out_path(&dir, &format!("{algo}.txt"));
            let made = mecs(&["sparsify", "--algo", algo, target[0], target[1], "--out", &spanner, &graph]);
            assert_eq!(made.code, 0, "{}", made.stderr);
            let checked = mecs(&["verify", "--against", &graph, target[0], target[1], &spanner]);
            assert_eq!(checked.code, 0);
            for k in ["result_edges", "result_weight", "result_apl", "feasible", "contains_mst_weight_tree"] {
                assert_eq!(made.key(k), checked.key(k), "{algo} {k}");
            }
        }
    }
}

#[test]
fn reports_repeat_exactly() {
    let strip = |r: Run| r.stdout.lines().filter(|l| !l.starts_with("wall_time_ms")).collect::<Vec<_>>().join("\n");
    let args = ["sparsify", "--algo", "addition", "--increment", "0.2", "karate"];
    assert_eq!(strip(mecs(&args)), strip(mecs(&args)));
}

#[test]
fn json_report_is_one_object() {
    let r = mecs(&["--json", "apl", "karate"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["report_version"], 1);
    assert_eq!(v["apl"], "1351/561");
    assert_eq!(v["diameter"], 5);
    assert_eq!(r.stdout.lines().count(), 1);
}

#[test]
fn dot_output_lists_the_selection() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3", K3);
    let dot = out_path(&dir, "s.dot");
    mecs(&["sparsify", "--algo", "addition", "--target-apl", "4/3", "--out-dot", &dot, &k3]);
    let text = fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph spanner {"));
    assert_eq!(text.matches(" -- ").count(), 2);
}

#[test]
fn exact_optima_on_cliques() {
    let dir = TempDir::new().unwrap();
    let k4 = file(&dir, "k4", K4);
    let k3 = file(&dir, "k3", K3);
    for method in ["enumerate", "bnb"] {
        let r = mecs(&["exact", "--method", method, "--target-apl", "1.5", &k4]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.key("result_edges"), "3");
        assert_eq!(r.key("certificate_optimum"), "3");
        let r = mecs(&["exact", "--method", method, "--target-apl", "4/3", &k3]);
        assert_eq!(r.key("result_edges"), "2");
    }
}

#[test]
fn exact_on_karate_hits_the_cap() {
    let r = mecs(&["exact", "--increment", "0.1", "--node-limit", "2000", "karate"]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert_eq!(r.key("status"), "incomplete");
    let r = mecs(&["exact", "--method", "enumerate", "--increment", "0.1", "--max-extra", "0", "karate"]);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

fn count_path_y(edges: &[(usize, usize)], n: usize, l: usize) -> usize {
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
        deg[a] += 1;
        deg[b] += 1;
    }
    let mut per_level = 0;
    for i in 0..n {
        for j in i + 1..n {
            per_level += deg[i] - usize::from(adj[i][j]);
        }
    }
    per_level * (l - 1)
}

fn karate_edges() -> Vec<(usize, usize)> {
    let dir = TempDir::new().unwrap();
    let r = mecs(&["sparsify", "--algo", "greedy-spanner", "--stretch", "1", "--out", &out_path(&dir, "k"), "karate"]);
    assert_eq!(r.code, 0);
    fs::read_to_string(dir.path().join("k"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<usize>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn path_model_counts_for_karate() {
    let dir = TempDir::new().unwrap();
    let lp = out_path(&dir, "k.lp");
    let r = mecs(&["export-mip", "--formulation", "path", "--L", "5", "--increment", "0.1", "-o", &lp, "karate"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let edges = karate_edges();
    assert_eq!(edges.len(), 78);
    assert_eq!(r.key("variables_x"), "78");
    assert_eq!(r.key("variables_u"), (34 * 33 / 2 * 5).to_string());
    assert_eq!(r.key("variables_y"), count_path_y(&edges, 34, 5).to_string());
    let meta = fs::read_to_string(format!("{lp}.meta")).unwrap();
    assert!(meta.contains("length_limit: 5\n"));
    assert!(meta.contains(&format!("fingerprint: {}\n", r.key("fingerprint"))));
    let model = fs::read_to_string(&lp).unwrap();
    assert!(model.contains("Subject To") && model.trim_end().ends_with("End"));
}

#[test]
fn auto_length_limit_is_the_diameter() {
    let dir = TempDir::new().unwrap();
    let lp = out_path(&dir, "k.lp");
    let r = mecs(&["export-mip", "--formulation", "path", "--increment", "0.1", "-o", &lp, "karate"]);
    assert_eq!(r.key("length_limit"), "5");
    let r = mecs(&["export-mip", "--formulation", "flow", "--increment", "0.1", "-o", &lp, "karate"]);
    assert_eq!(r.key("length_limit"), "none");
    assert_eq!(r.key("variables_f"), (2 * 78 * 34 * 33 / 2).to_string());
    assert_eq!(mecs(&["export-mip", "--formulation", "flow", "--L", "3", "--increment", "0.1", "-o", &lp, "karate"]).code, 2);
}

#[test]
fn weighted_graphs_need_the_weighted_path_model() {
    let dir = TempDir::new().unwrap();
    let g = out_path(&dir, "ud.txt");
    assert_eq!(mecs(&["gen", "unit-disk", "--n", "12", "--box", "30", "--weighted", "--seed", "1", "-o", &g]).code, 0);
    let lp = out_path(&dir, "m.lp");
    for f in ["path", "flow"] {
        let r = mecs(&["export-mip", "--formulation", f, "--increment", "0.5", "-o", &lp, &g]);
        assert_eq!(r.code, 2);
        assert!(r.stderr.contains("path-weighted"), "{}", r.stderr);
    }
    let r = mecs(&["export-mip", "--formulation", "path-weighted", "--increment", "0.5", "-o", &lp, &g]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn internal_solver_loop() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3", K3);
    let r = mecs(&["solve-mip", "--solver-cmd", "internal:exact", "--target-apl", "4/3", &k3]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.key("iterations"), "2");
    assert_eq!(r.key("iteration_limits"), "1,2");
    assert_eq!(r.key("final_length_limit"), "2");
    assert_eq!(r.key("result_edges"), "2");
    let tree = file(&dir, "tree", "0 1\n1 2\n1 3\n3 4\n");
    let r = mecs(&["solve-mip", "--solver-cmd", "internal:exact", "--increment", "1/2", &tree]);
    assert_eq!(r.key("iterations"), "1");
    assert_eq!(r.key("result_edges"), "4");
}

#[test]
fn external_solver_command() {
    let dir = TempDir::new().unwrap();
    let tree = file(&dir, "tree", "0 1\n1 2\n");
    // keep every edge variable at 1
    let cmd = "grep -o 'x_[0-9]*_[0-9]*' {model} | sort -u | sed 's/$/ 1/' > {solution}";
    let r = mecs(&["solve-mip", "--solver-cmd", cmd, "--increment", "1", &tree]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.key("result_edges"), "2");
}

#[test]
fn solver_failures_exit_with_the_solver_code() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3", K3);
    let r = mecs(&["solve-mip", "--solver-cmd", "echo broken >&2; exit 7", "--target-apl", "4/3", &k3]);
    assert_eq!(r.code, 5);
    assert!(r.stderr.contains("broken"));
    assert_eq!(r.key("status"), "solver-failure");
    let r = mecs(&["solve-mip", "--solver-cmd", "sleep 5", "--timeout", "0.2", "--target-apl", "4/3", &k3]);
    assert_eq!(r.code, 5);
    assert_eq!(r.key("status"), "timeout");
    let r = mecs(&["solve-mip", "--solver-cmd", "echo 'x_0_1 0.5' > {solution}", "--target-apl", "4/3", &k3]);
    assert_eq!(r.code, 5);
}

#[test]
fn timeout_after_a_round_reports_the_incumbent() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3", K3);
    let state = out_path(&dir, "state");
    // first call answers a two-edge path, later calls hang
    let cmd = format!(
        "if [ -e '{state}' ]; then sleep 5; else touch '{state}'; printf 'x_0_1 1\\nx_0_2 1\\nx_1_2 0\\n' > {{solution}}; fi"
    );
    let r = mecs(&["solve-mip", "--solver-cmd", &cmd, "--timeout", "1", "--target-apl", "4/3", &k3]);
    assert_eq!(r.code, 5, "{}", r.stderr);
    assert_eq!(r.key("status"), "timeout");
    assert_eq!(r.key("incumbent"), "true");
    assert_eq!(r.key("result_edges"), "2");
}

fn gen_to(dir: &TempDir, name: &str, args: &[&str]) -> (Run, String) {
    let path = out_path(dir, name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", &path]);
    let run = mecs(&all);
    let text = fs::read_to_string(&path).unwrap_or_default();
    (run, text)
}

#[test]
fn unit_disk_generation_is_seeded() {
    let dir = TempDir::new().unwrap();
    let args = ["unit-disk", "--n", "50", "--box", "100", "--range", "20", "--seed", "7"];
    let (r, a) = gen_to(&dir, "a", &args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, b) = gen_to(&dir, "b", &args);
    assert_eq!(a, b);
    let other = ["unit-disk", "--n", "50", "--box", "100", "--range", "20", "--seed", "8"];
    assert_ne!(a, gen_to(&dir, "c", &other).1);
    assert!(a.contains("# seed: 7"));
    assert_eq!(mecs(&["apl", &out_path(&dir, "a")]).key("connected"), "true");
}

#[test]
fn gadget_headers() {
    let dir = TempDir::new().unwrap();
    let (r, text) = gen_to(&dir, "ss", &["gadget-subset-sum", "--values", "1,2", "--target", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(text.contains("# r: 8\n") && text.contains("# C: 22\n"), "{text}");
    let (r, text) = gen_to(&dir, "ec", &["gadget-ecsts", "--t", "1", "--subsets", "1,2,3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(text.contains("# r: 9\n"), "{text}");
    let printed = mecs(&["gen", "gadget-ecsts", "--t", "1", "--subsets", "1,2,3"]);
    assert_eq!(printed.stdout, text);
}

#[test]
fn invalid_generator_parameters() {
    assert_eq!(mecs(&["gen", "unit-disk", "--n", "0"]).code, 2);
    assert_eq!(mecs(&["gen", "gadget-subset-sum", "--values", "1,0", "--target", "1"]).code, 2);
    assert_eq!(mecs(&["gen", "gadget-ecsts", "--t", "1", "--subsets", "1,2"]).code, 2);
    assert_eq!(mecs(&["gen", "gadget-ecsts", "--t", "1", "--subsets", "0,1,2"]).code, 2);
    assert_eq!(mecs(&["gen", "gadget-ecsts", "--t", "2", "--subsets", "1,2,3;1,4,5"]).code, 2);
}

#[test]
fn verify_accepts_the_original() {
    let dir = TempDir::new().unwrap();
    let k4 = file(&dir, "k4", K4);
    let r = mecs(&["verify", "--against", &k4, "--stretch", "1", &k4]);
    assert_eq!(r.code, 0);
    assert_eq!(r.key("feasible"), "true");
}

#[test]
fn karate_mst_misses_a_small_increment() {
    let dir = TempDir::new().unwrap();
    let mst = out_path(&dir, "mst");
    mecs(&["sparsify", "--algo", "removal", "--increment", "2", "--out", &mst, "karate"]);
    let r = mecs(&["verify", "--against", "karate", "--increment", "0.1", &mst]);
    assert_eq!(r.code, 1);
    assert_eq!(r.key("feasible"), "false");
    let apl: f64 = r.key("result_apl_decimal").parse().unwrap();
    let bound: f64 = r.key("target_bound_decimal").parse().unwrap();
    assert!(apl > bound && bound > 2.5);
}

#[test]
fn verify_rejects_foreign_edges() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "p", "0 1\n1 2\n2 3\n");
    let extra = file(&dir, "extra", "0 1\n0 2\n");
    let r = mecs(&["verify", "--against", &path, "--increment", "1", &extra]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not in the original"), "{}", r.stderr);
    let stranger = file(&dir, "stranger", "0 9\n");
    assert_eq!(mecs(&["verify", "--against", &path, "--increment", "1", &stranger]).code, 2);
}

#[test]
fn verify_uses_file_labels() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g", "10 20\n20 30\n30 10\n");
    let s = out_path(&dir, "s");
    let r = mecs(&["sparsify", "--algo", "addition", "--target-apl", "4/3", "--out", &s, &g]);
    assert_eq!(r.code, 0);
    let written = fs::read_to_string(&s).unwrap();
    assert!(written.lines().any(|l| l.split_whitespace().any(|x| x == "30")));
    assert_eq!(mecs(&["verify", "--against", &g, "--target-apl", "4/3", &s]).code, 0);
}
