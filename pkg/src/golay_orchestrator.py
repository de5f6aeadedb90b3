import itertools
import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

import numpy as np
from tqdm import tqdm

from .analysis.sequence_analyzer import (
    QarySequence,
    anf,
    binary_golay_pair_members,
    extract_sets,
    golay_check,
    paraunitary_check,
    parse_anf,
    pmepr,
    standard_golay_sequences,
)
from .config import load_config
from .construction.paraunitary import (
    coefficient_direct,
    construct,
    example8_pair_generator,
    lemma3_expansion_check,
    random_construction_spec,
)
from .data.data_loader import GolayDataLoader
from .errors import GolaySetError, InvalidParameterError, NotComplementaryError, NotEquivalentError
from .hadamard.butson import are_equivalent, dephase, representatives
from .utils.reporting import (
    degree_table,
    format_table,
    input_digests,
    pmepr_table,
    to_serializable,
    write_table,
)

logger = logging.getLogger(__name__)

REPO_ROOT = Path(__file__).resolve().parent.parent

PathLike = Union[str, Path]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    error: Optional[str] = None


@dataclass
class RunReport:
    """
    Outcome of one command: echo, input digests, per-check results, timing and written files.

    stdout holds the data lines of the command; it is not part of the report itself.
    """

    command: List[str]
    input_digests: Dict[str, str] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    timing_ms: float = 0.0
    outputs: List[str] = field(default_factory=list)
    stdout: List[str] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))
        return passed

    def fail(self, name: str, error: BaseException):
        self.checks.append(CheckResult(
            name=name,
            passed=False,
            detail=str(error),
            error=type(error).__name__,
        ))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'input_digests': self.input_digests,
            'checks': [
                {'name': c.name, 'passed': c.passed, 'detail': c.detail, 'error': c.error}
                for c in self.checks
            ],
            'passed': self.passed,
            'timing_ms': round(self.timing_ms, 3),
            'outputs': self.outputs,
        }

    def to_text(self) -> str:
        lines = [f"command: {' '.join(self.command)}"]
        for path, digest in self.input_digests.items():
            lines.append(f"input:   {path} sha256={digest}")
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            text = f"[{status}] {c.name}"
            if c.detail:
                text += f": {c.detail}"
            if c.error:
                text += f" ({c.error})"
            lines.append(text)
        for path in self.outputs:
            lines.append(f"output:  {path}")
        lines.append(f"result:  {'PASS' if self.passed else 'FAIL'} in {self.timing_ms:.1f} ms")
        return '\n'.join(lines)


class GolayOrchestrator:
    """Drives the library for each command and collects the outcome in a RunReport."""

    def __init__(self,
                 config: Optional[Dict[str, Any]] = None,
                 data_dir: Optional[PathLike] = None,
                 progress: bool = False):

        self.config = config if config is not None else load_config()
        paths = self.config.get('paths', {})
        self.data_dir = self._resolve(data_dir or paths.get('fixtures_dir', 'data/input'))
        self.output_dir = self._resolve(paths.get('output_dir', 'data/output'))
        self.data_loader = GolayDataLoader(self.data_dir)
        self.progress = progress

    @staticmethod
    def _resolve(path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else REPO_ROOT / path

    @contextmanager
    def _guard(self, report: RunReport, name: str) -> Iterator[None]:
        try:
            yield
        except (GolaySetError, OSError, OverflowError) as e:
            logger.debug("%s failed: %s", name, e)
            report.fail(name, e)

    @contextmanager
    def _timed(self, report: RunReport) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            report.timing_ms = (time.perf_counter() - start) * 1000.0

    def _digest(self, report: RunReport, *paths: PathLike):
        with self._guard(report, "read inputs"):
            report.input_digests.update(input_digests(paths))

    def _write(self, report: RunReport, data: Any, path: PathLike):
        report.outputs.append(str(self.data_loader.write_json(data, path)))

    def cmd_construct(self, spec_path: PathLike, out_path: Optional[PathLike] = None) -> RunReport:
        """
        Build the polynomial matrix of a spec file and write its 2N Golay sets.

        Args:
            spec_path: Construction spec JSON
            out_path: Destination; defaults to <output_dir>/construction.json

        Returns:
            RunReport; stdout holds the degree summary of every entry
        """
        report = RunReport(command=['construct', str(spec_path)])
        with self._timed(report):
            self._digest(report, spec_path)
            if not report.passed:
                return report

            with self._guard(report, "construct"):
                spec = self.data_loader.load_spec(spec_path)
                M = construct(spec)
                report.check("construct", True, f"{M.N}x{M.N} matrix, L={M.L}, unit coefficients")

                sets = extract_sets(M)
                report.check("golay sets", True, f"{len(sets['rows'])} row sets, {len(sets['columns'])} column sets")
                report.check("paraunitary", paraunitary_check(M), f"M·M† = {M.N * M.L}·I")

                destination = out_path or self.output_dir / "construction.json"
                self._write(report, self.data_loader.construction_output(spec, M), destination)

                families = [
                    (f"row {i}", [QarySequence(M.q, tuple(M.entry(i, j))) for j in range(M.N)])
                    for i in range(M.N)
                ]
                degrees = degree_table(families)
                if not degrees.empty:
                    report.stdout.append(format_table(degrees[['set', 'sequence', 'degree']]))
                    report.check("degree summary", True, f"degrees {sorted(set(int(d) for d in degrees['degree']))}")

        return report

    def cmd_verify(self, set_path: PathLike) -> RunReport:
        report = RunReport(command=['verify', str(set_path)])
        with self._timed(report):
            self._digest(report, set_path)
            with self._guard(report, "load sets"):
                for label, sequences in self.data_loader.load_sets(set_path):
                    try:
                        golay_set = golay_check(sequences)
                    except NotComplementaryError as e:
                        report.stdout.append(f"{label}: FAIL at u={e.shift} (sum {e.value})")
                        report.fail(f"golay {label}", e)
                        continue
                    report.stdout.append(f"{label}: PASS")
                    report.check(f"golay {label}", True, f"N={golay_set.N}, L={golay_set.L}")

                M = self.data_loader.load_matrix(set_path)
                if M is not None:
                    report.check("paraunitary", paraunitary_check(M), f"M·M† = {M.N * M.L}·I")
        return report

    def cmd_pmepr(self,
                  set_path: PathLike,
                  oversample: Optional[int] = None,
                  out_path: Optional[PathLike] = None) -> RunReport:
        """
        PMEPR table of every sequence in a set file.

        Families that pass the Golay test are additionally checked against the bound N.
        """
        if oversample is None:
            oversample = self.config['pmepr']['oversample']
        tolerance = self.config['pmepr']['tolerance']
        report = RunReport(command=['pmepr', str(set_path), f'--oversample={oversample}'])
        with self._timed(report):
            self._digest(report, set_path)
            with self._guard(report, "pmepr"):
                families = self.data_loader.load_sets(set_path)
                table = pmepr_table(families, oversample)
                report.stdout.append(format_table(table))

                for label, sequences in families:
                    try:
                        golay_check(sequences)
                    except NotComplementaryError:
                        continue
                    peak = float(table.loc[table['set'] == label, 'pmepr'].max())
                    report.check(
                        f"pmepr bound {label}",
                        peak <= len(sequences) + tolerance,
                        f"max {peak:.9f} <= N={len(sequences)}",
                    )

                if out_path:
                    report.outputs.append(str(write_table(table, out_path)))
        return report

    def cmd_anf(self,
                set_path: PathLike,
                reverse: bool = False,
                compact: bool = False,
                out_path: Optional[PathLike] = None) -> RunReport:
        report = RunReport(command=['anf', str(set_path)] + (['--reverse'] if reverse else []))
        with self._timed(report):
            self._digest(report, set_path)
            with self._guard(report, "anf"):
                records = []
                mismatched = 0
                for label, sequences in self.data_loader.load_sets(set_path):
                    for index, seq in enumerate(sequences):
                        f = anf(seq, reverse=reverse)
                        report.stdout.append(f"{label} [{index}]: {f.to_text(compact=compact)}")
                        expected = seq.array[::-1] if reverse else seq.array
                        if not np.array_equal(f.evaluate_all(), expected):
                            mismatched += 1
                        records.append({'set': label, 'sequence': index, **f.to_dict()})
                report.check("anf round trip", mismatched == 0, f"{len(records) - mismatched}/{len(records)} re-evaluate to the input")
                if out_path:
                    self._write(report, records, out_path)
        return report

    def cmd_hadamard(self, action: str, args: Sequence[str], out_path: Optional[PathLike] = None) -> RunReport:
        """
        Matrix utilities.

        Args:
            action: verify | representatives | equivalent | dephase
            args: matrix file paths, or q and N for representatives
        """
        report = RunReport(command=['hadamard', action] + [str(a) for a in args])
        with self._timed(report):
            if action in ('verify', 'dephase', 'equivalent'):
                self._digest(report, *args)
                if not report.passed:
                    return report

            with self._guard(report, f"hadamard {action}"):
                if action == 'verify':
                    H = self.data_loader.load_hadamard(args[0])
                    report.stdout.append(str(H))
                    report.check("butson", True, f"H({H.q}, {H.size}) satisfies H·H† = {H.size}·I")

                elif action == 'representatives':
                    q, N = int(args[0]), int(args[1])
                    reps = representatives(q, N)
                    report.stdout.append('\n\n'.join(str(H) for H in reps))
                    report.check("representatives", True, f"{len(reps)} matrices for H({q}, {N})")
                    if out_path:
                        self._write(report, [H.to_dict() for H in reps], out_path)

                elif action == 'equivalent':
                    H1 = self.data_loader.load_hadamard(args[0])
                    H2 = self.data_loader.load_hadamard(args[1])
                    search = self.config.get('equivalence', {})
                    try:
                        witness = are_equivalent(
                            H1, H2,
                            max_size=search.get('max_size', 5),
                            max_alphabet=search.get('max_alphabet', 8),
                            progress=self.progress,
                        )
                    except NotEquivalentError as e:
                        report.stdout.append("NOT EQUIVALENT")
                        report.check("equivalence search", True, f"exhausted {e.candidates_checked} candidates")
                    else:
                        report.stdout.append("EQUIVALENT")
                        report.stdout.append(json.dumps(witness.to_dict()))
                        report.check("equivalence search", True, "witness verified")
                        if out_path:
                            self._write(report, witness.to_dict(), out_path)

                elif action == 'dephase':
                    H = self.data_loader.load_hadamard(args[0])
                    dephased, witness = dephase(H)
                    report.stdout.append(str(dephased))
                    report.stdout.append(json.dumps(witness.to_dict()))
                    report.check("dephase", True, "first row and column set to exponent 0")
                    if out_path:
                        report.outputs.append(str(self.data_loader.save_hadamard(dephased, out_path)))

                else:
                    raise ValueError(f"unknown hadamard action '{action}'")
        return report

    def cmd_reproduce(self,
                      target: str,
                      seed: Optional[int] = None,
                      trials: Optional[int] = None) -> RunReport:
        """
        Built-in reproductions: example7, example8, lemma3 or properties.

        Args:
            target: Reproduction to run
            seed: Seed for the randomised targets (config random.seed otherwise)
            trials: Trial count for the randomised targets
        """
        report = RunReport(command=['reproduce', target])
        runners = {
            'example7': self._reproduce_example7,
            'example8': self._reproduce_example8,
            'lemma3': self._reproduce_lemma3,
            'properties': self._reproduce_properties,
        }
        if target not in runners:
            raise ValueError(f"unknown reproduction target '{target}', choose from {sorted(runners)}")

        seed = self.config['random']['seed'] if seed is None else seed
        logger.info("reproducing %s (seed %d)", target, seed)
        with self._timed(report):
            with self._guard(report, target):
                if trials is not None and trials < 1:
                    raise InvalidParameterError(f"trial count must be positive, got {trials}")
                runners[target](report, seed, trials)
        logger.info("%s: %s in %.1f ms", target, "PASS" if report.passed else "FAIL", report.timing_ms)
        return report

    def _reproduce_example7(self, report: RunReport, seed: int, trials: Optional[int]):
        spec_path = self.data_loader.fixture_path("example7_spec.json")
        listing_path = self.data_loader.fixture_path("example7_anf.json")
        self._digest(report, spec_path, listing_path)

        spec = self.data_loader.load_spec(spec_path)
        M = construct(spec)
        sets = extract_sets(M)
        report.check("golay sets", len(sets['rows']) + len(sets['columns']) == 2 * M.N,
                     f"{2 * M.N} sets of size {M.N}, length {M.L}")
        report.check("paraunitary", paraunitary_check(M), f"constant {M.N * M.L}")

        listing = self.data_loader.load_anf_listing(listing_path)
        q, v = listing['q'], listing['v']
        matched = 0
        degrees = set()
        for entry in listing['functions']:
            r, s = entry['r'], entry['s']
            computed = anf(QarySequence(M.q, tuple(M.entry(r, s))), reverse=True)
            degrees.add(computed.degree)
            expected = parse_anf(entry.get('corrected', entry['printed']), q, v)
            if computed == expected:
                matched += 1
            else:
                logger.debug("Boolfunc_{%d,%d}: computed %s", r, s, computed.to_text(compact=True))
            report.stdout.append(f"Boolfunc_{{{r},{s}}} = {computed.to_text(compact=True)}")

        total = len(listing['functions'])
        report.check("anf listing", matched == total, f"{matched}/{total} functions matched")
        report.check("degree", degrees == {3}, f"degrees {sorted(degrees)}")

    def _reproduce_example8(self, report: RunReport, seed: int, trials: Optional[int]):
        q = self.config['example8']['q']
        n = self.config['example8']['n']
        length = 2 ** n

        members = set(binary_golay_pair_members(length)) if q == 2 else None
        produced = set()
        passed = 0
        outside = 0
        combos = list(itertools.product(itertools.product(range(q), repeat=n + 1), itertools.permutations(range(n))))
        for phases, perm in tqdm(combos, disable=not self.progress, desc="example8", leave=False):
            M = construct(example8_pair_generator(q, n, phases, perm))
            pair = [QarySequence(q, tuple(M.entry(0, j))) for j in range(2)]
            golay_check(pair)
            passed += 1
            for seq in pair:
                produced.add(seq.exps)
                if members is not None and seq.exps not in members:
                    outside += 1

        report.check("golay pairs", passed == len(combos), f"{passed}/{len(combos)} first rows are Golay pairs")
        if members is not None:
            report.check("pair table", outside == 0,
                         f"all generated members among the {len(members)} length-{length} pair members")
        standard = set(standard_golay_sequences(q, n))
        report.stdout.append(
            f"distinct sequences: {len(produced)}; standard sequences covered: "
            f"{len(produced & standard)}/{len(standard)}"
        )

    def _reproduce_lemma3(self, report: RunReport, seed: int, trials: Optional[int]):
        settings = self.config['lemma3']
        if trials is None:
            trials = settings['trials']
        bound = settings['entry_bound']
        rng = np.random.default_rng(seed)

        passed = 0
        for _ in tqdm(range(trials), disable=not self.progress, desc="lemma3", leave=False):
            n = int(rng.integers(1, settings['max_n'] + 1))
            dim = int(rng.integers(1, settings['max_dimension'] + 1))
            fs = [[rng.integers(-bound, bound + 1, (dim, dim)) for _ in range(4)] for _ in range(n)]
            ordering = [int(k) for k in rng.permutation(n)]
            passed += lemma3_expansion_check(fs, ordering)

        report.check("lemma3", passed == trials, f"{passed}/{trials} identities hold (seed {seed})")

    def _reproduce_properties(self, report: RunReport, seed: int, trials: Optional[int]):
        settings = self.config['properties']
        if trials is None:
            trials = settings['trials']
        oversample = self.config['pmepr']['oversample']
        tolerance = self.config['pmepr']['tolerance']
        rng = np.random.default_rng(seed)

        counts = {'golay': 0, 'paraunitary': 0, 'direct': 0, 'pmepr': 0}
        for _ in tqdm(range(trials), disable=not self.progress, desc="properties", leave=False):
            q = int(rng.choice(settings['alphabets']))
            N = int(rng.choice(settings['sizes']))
            n = int(rng.integers(0, settings['max_n'] + 1))
            spec = random_construction_spec(q, N, n, rng)
            M = construct(spec)

            try:
                extract_sets(M)
                counts['golay'] += 1
            except NotComplementaryError as e:
                logger.debug("q=%d N=%d n=%d: %s", q, N, n, e)

            counts['paraunitary'] += paraunitary_check(M)
            counts['direct'] += all(
                np.array_equal(coefficient_direct(spec, m), M.coefficient(m)) for m in range(M.L)
            )
            peaks = [
                pmepr(QarySequence(q, tuple(M.entry(i, j))), oversample)
                for i in range(N) for j in range(N)
            ]
            counts['pmepr'] += max(peaks) <= N + tolerance

        report.check("golay sets", counts['golay'] == trials, f"{counts['golay']}/{trials} (seed {seed})")
        report.check("paraunitary", counts['paraunitary'] == trials, f"{counts['paraunitary']}/{trials}")
        report.check("direct coefficients", counts['direct'] == trials, f"{counts['direct']}/{trials}")
        report.check("pmepr bound", counts['pmepr'] == trials, f"{counts['pmepr']}/{trials}")


def report_json(report: RunReport) -> str:
    return json.dumps(to_serializable(report.to_dict()), indent=2)
