#!/usr/bin/env python3

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

from src.analysis.sequence_analyzer import QarySequence, anf, extract_sets, paraunitary_check, pmepr
from src.construction.paraunitary import ConstructionSpec, construct, example8_pair_generator
from src.golay_orchestrator import GolayOrchestrator
from src.hadamard.butson import representatives


def main():

    orchestrator = GolayOrchestrator()

    print("Loading the quaternary example spec...")
    spec = orchestrator.data_loader.load_spec(orchestrator.data_loader.fixture_path("example7_spec.json"))

    print("Running the paraunitary construction...")
    M = construct(spec)
    sets = extract_sets(M)
    print(f"✓ {M.N}x{M.N} matrix with sequences of length {M.L}")
    print(f"  Golay sets: {len(sets['rows'])} rows, {len(sets['columns'])} columns")
    print(f"  Paraunitary: {paraunitary_check(M)}")

    seq = QarySequence(M.q, tuple(M.entry(1, 1)))
    print(f"  PMEPR of entry (1, 1): {pmepr(seq):.4f} (bound {M.N})")
    print(f"  ANF of entry (1, 1), read from the top: {anf(seq, reverse=True).to_text(compact=True)}")

    print("\nBuilding a binary Golay pair of length 8...")

    pair_spec = example8_pair_generator(2, 3, phases=(0, 1, 0, 1), perm=(2, 0, 1))
    pair = construct(pair_spec)
    print(f"✓ First row: {pair.entry(0, 0).tolist()} / {pair.entry(0, 1).tolist()}")

    print("\nUsing the second class of quaternary order-4 matrices for every factor...")

    H = representatives(4, 4)[1]
    M = construct(ConstructionSpec(q=4, N=4, n=2, perm=(0, 1), hadamards=(H, H, H)))
    peak = max(pmepr(QarySequence(4, tuple(M.entry(i, j)))) for i in range(4) for j in range(4))
    print(f"✓ Largest PMEPR over all 16 entries: {peak:.4f}")

    print("\nReproducing the quaternary listing...")

    report = orchestrator.cmd_reproduce('example7')
    for check in report.checks:
        status = "✓" if check.passed else "✗"
        print(f"{status} {check.name}: {check.detail}")
    if not report.passed:
        return 1

    print("\nRunning randomised construction checks (20 trials)...")

    report = orchestrator.cmd_reproduce('properties', trials=20)
    for check in report.checks:
        status = "✓" if check.passed else "✗"
        print(f"{status} {check.name}: {check.detail}")

    print("\nSaving the construction...")
    report = orchestrator.cmd_construct(orchestrator.data_loader.fixture_path("example7_spec.json"))
    print(f"✓ Results saved to {report.outputs[0]}" if report.outputs else "✗ Nothing written")

    print("\n🎉 Example completed successfully!")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
