"""End-to-end checks of the command-line interface.

Usage: cli_test.py /path/to/lcmclust
"""

import os
import subprocess
import sys
import tempfile

import numpy as np

CLI = sys.argv[1]


def run(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{args} exited {proc.returncode} (expected {expect})\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc


def read_kv(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            key, _, value = line.strip().partition("=")
            out[key] = value
    return out


def write_noiseless_fixture(path, n=60, j=12, k=3):
    theta = np.zeros((j, k))
    for col in range(j):
        theta[col, col % k] = 1.0
    labels = np.array([i % k + 1 for i in range(n)])
    r = theta[:, labels - 1].T.astype(int)
    np.savetxt(path, r, fmt="%d", delimiter=",")
    return labels


def write_senate_fixture(path, seed=314):
    # Two planted blocks shaped like the roll-call data, with some NAs.
    rng = np.random.default_rng(seed)
    n, j = 94, 486
    rows = []
    for i in range(n):
        first = i < 47
        cells = []
        for col in range(j):
            if rng.random() < 0.05:
                cells.append("NA")
            else:
                p = 0.9 if first == (col % 2 == 0) else 0.1
                cells.append(str(int(rng.random() < p)))
        rows.append(",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def hamming_loss_2perm(a, b, k):
    from itertools import permutations

    a = np.asarray(a)
    b = np.asarray(b)
    best = 1.0
    for perm in permutations(range(1, k + 1)):
        mapped = np.array([perm[x - 1] for x in b])
        best = min(best, float(np.mean(a != mapped)))
    return best


def main():
    tmp = tempfile.mkdtemp(prefix="lcm_cli_")

    # simulate -> fit roundtrip on the simulated file
    sim_dir = os.path.join(tmp, "sim")
    run("simulate", "--n", "120", "--j", "40", "--k", "3", "--beta", "1,8",
        "--seed", "5", "--out", sim_dir)
    assert os.path.exists(os.path.join(sim_dir, "responses.csv"))
    assert os.path.exists(os.path.join(sim_dir, "labels.txt"))
    assert os.path.exists(os.path.join(sim_dir, "theta.csv"))

    fit_dir = os.path.join(tmp, "fit_sim")
    run("fit", "--input", os.path.join(sim_dir, "responses.csv"), "--k", "3",
        "--method", "sola_plus", "--steps", "10", "--seed", "1", "--out", fit_dir)
    summary = read_kv(os.path.join(fit_dir, "summary.txt"))
    trace = [float(x) for x in summary["loglik_trace"].split(",")]
    assert len(trace) <= 10
    assert all(b >= a - 1e-9 for a, b in zip(trace, trace[1:]))
    assert summary["failure"] == "none"

    # spec on a noiseless fixture recovers the planted partition
    noiseless = os.path.join(tmp, "noiseless.csv")
    planted = write_noiseless_fixture(noiseless)
    spec_dir = os.path.join(tmp, "fit_spec")
    run("fit", "--input", noiseless, "--k", "3", "--method", "spec", "--seed", "2",
        "--out", spec_dir)
    got = np.loadtxt(os.path.join(spec_dir, "labels.txt"), dtype=int)
    assert hamming_loss_2perm(got, planted, 3) == 0.0
    theta_hat = np.loadtxt(os.path.join(spec_dir, "theta.csv"), delimiter=",")
    assert theta_hat.shape == (12, 3)

    # oracle method with the true theta
    oracle_dir = os.path.join(tmp, "fit_oracle")
    run("fit", "--input", os.path.join(sim_dir, "responses.csv"), "--k", "3",
        "--method", "oracle", "--theta", os.path.join(sim_dir, "theta.csv"),
        "--out", oracle_dir)

    # senate-shaped fixture: select-k and --auto-k should find 2 classes
    senate = os.path.join(tmp, "senate.csv")
    write_senate_fixture(senate)
    sel = run("select-k", "--input", senate, "--impute-seed", "9")
    kv = dict(line.split("=", 1) for line in sel.stdout.strip().splitlines())
    assert kv["k_hat"] == "2", kv
    assert 63.0 < float(kv["threshold"]) < 65.0

    auto_dir = os.path.join(tmp, "fit_auto")
    run("fit", "--input", senate, "--auto-k", "--method", "sola", "--impute-seed", "9",
        "--out", auto_dir)
    auto_summary = read_kv(os.path.join(auto_dir, "summary.txt"))
    assert auto_summary["k_hat"] == "2"

    # diagnose with Beta parameters only
    diag = run("diagnose", "--beta", "5,5")
    assert "beta_B=" in diag.stdout
    beta_b = float(diag.stdout.strip().split("=")[1])
    assert abs(beta_b - 0.4772727272727273) < 1e-9
    diag18 = run("diagnose", "--beta", "1,8")
    assert abs(float(diag18.stdout.strip().split("=")[1]) - 0.10123456790123457) < 1e-9

    # diagnose with a theta file
    theta_file = os.path.join(tmp, "theta2.csv")
    with open(theta_file, "w") as fh:
        fh.write("0.9,0.1\n")
    diag_theta = run("diagnose", "--theta", theta_file)
    kv = dict(line.split("=", 1) for line in diag_theta.stdout.strip().splitlines())
    assert abs(float(kv["oracle_exponent"]) - 0.5108256237659907) < 1e-6

    # bench: tiny grid, deterministic CSV with --no-timing
    cfg = os.path.join(tmp, "bench.cfg")
    with open(cfg, "w") as fh:
        fh.write("methods=spec,sola,oracle\nbeta=1,8\nreplicates=3\n"
                 "base_seed=11\ngrid=40,20,2\n")
    rows1 = os.path.join(tmp, "rows1.csv")
    rows2 = os.path.join(tmp, "rows2.csv")
    agg = os.path.join(tmp, "agg.csv")
    run("bench", "--config", cfg, "--out-csv", rows1, "--aggregate-csv", agg, "--no-timing")
    run("bench", "--config", cfg, "--out-csv", rows2, "--no-timing")
    with open(rows1) as fh:
        body1 = fh.read()
    with open(rows2) as fh:
        body2 = fh.read()
    assert body1 == body2, "bench rows must be byte-identical with --no-timing"
    header = body1.splitlines()[0].split(",")
    assert header == ["method", "N", "J", "K", "replicate", "loss", "failed",
                      "seconds", "instance_hash"]
    # Paired seeding: identical instance hash across methods per replicate.
    lines = [line.split(",") for line in body1.splitlines()[1:]]
    by_rep = {}
    for parts in lines:
        by_rep.setdefault(parts[4], set()).add(parts[8])
    assert all(len(hashes) == 1 for hashes in by_rep.values())
    with open(agg) as fh:
        assert fh.readline().startswith("method,N,J,K,replicates,failures")

    # preset smoke run at reduced replicates
    preset_rows = os.path.join(tmp, "preset_rows.csv")
    run("bench", "--preset", "sim2-small", "--replicates", "2",
        "--methods", "spec,sola", "--out-csv", preset_rows, "--no-timing")
    with open(preset_rows) as fh:
        assert len(fh.readlines()) == 1 + 2 * 2 * 3  # header + methods*reps*grid

    # error paths: missing file -> 1; degenerate fit -> 2
    run("fit", "--input", os.path.join(tmp, "missing.csv"), "--k", "2",
        "--out", os.path.join(tmp, "x"), expect=1)
    degenerate = os.path.join(tmp, "degenerate.csv")
    with open(degenerate, "w") as fh:
        fh.write("1,0\n1,0\n1,0\n1,0\n")
    run("fit", "--input", degenerate, "--k", "2", "--method", "sola",
        "--out", os.path.join(tmp, "fit_degenerate"), expect=2)

    print("cli tests passed")


if __name__ == "__main__":
    main()
