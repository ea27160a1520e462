"""Functional evaluation of candidate Java code against a task's tests.

Candidate and test code are written to an isolated scratch directory as one
compilation unit, compiled with javac and run with java; the test process
exit code is the verdict. A marker-driven mock backend stands in when no JDK
is wanted (demos, offline tests).
"""

from __future__ import annotations

import os
import re
import signal
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .dataset import Task
from .pattern_checker import evaluate_predicates
from .source_model import parse_compilation_unit, select_primary_class

PASS = "Pass"
TEST_FAIL = "TestFail"
COMPILE_ERROR = "CompileError"
TIMEOUT = "Timeout"
ABORTED = "Aborted"

MISSING_EXTERNAL_LIBRARY = "missing_external_library"
NON_CODE_OUTPUT = "non_code_output"
OTHER_COMPILE_ERROR = "other_compile_error"

# Mock backend markers, matched anywhere in the candidate (comments included).
MOCK_FAIL_MARKER = "MOCK-FAIL"
MOCK_TIMEOUT_MARKER = "MOCK-TIMEOUT"

_DETAIL_LIMIT = 4000

# Diagnostics that point at a library absent from the scratch classpath.
_MISSING_LIBRARY_PATTERNS = (
    re.compile(r"package\s+[A-Za-z_$][\w.$]*\s+does not exist"),
    re.compile(r"cannot access\s+[A-Za-z_$][\w.$]*"),
)
_MISSING_SYMBOL = re.compile(r"cannot find symbol[\s\S]{0,200}?symbol:\s*class\s+(\w+)")


class ToolchainError(Exception):
    pass


@dataclass(frozen=True)
class OutcomeLabel:
    kind: str
    detail: str = ""
    compile_error_category: str | None = None


def check_toolchain(javac: str = "javac", java: str = "java") -> None:
    """Verify both tools launch; called once at startup, not per task."""
    for tool in (javac, java):
        try:
            probe = subprocess.run(
                [tool, "-version"], capture_output=True, text=True, timeout=30
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise ToolchainError(f"cannot run {tool!r}: {exc}") from exc
        if probe.returncode != 0:
            raise ToolchainError(f"{tool!r} exited with {probe.returncode}")


def adapt_test_code(test_code: str, class_name: str) -> str:
    """Rewrite no-arg instantiations of the task class to accessor calls."""
    pattern = re.compile(rf"new\s+{re.escape(class_name)}\s*\(\s*\)")
    return pattern.sub(f"{class_name}.getInstance()", test_code)


def evaluate_functionality(
    candidate: str,
    task: Task,
    budget_s: int = 30,
    *,
    scratch_dir: str | Path,
    javac: str = "javac",
    java: str = "java",
    adapt_tests: bool = False,
) -> OutcomeLabel:
    scratch = Path(scratch_dir)
    scratch.mkdir(parents=True, exist_ok=True)
    test_code = task.test_code
    if adapt_tests and task.expected_class_name and _has_private_constructor(candidate, task):
        test_code = adapt_test_code(test_code, task.expected_class_name)

    # One compilation unit: the test declares the (public) entry class Main,
    # so the file must carry that name; candidate imports stay at the top.
    source = candidate.rstrip() + "\n\n" + test_code
    try:
        (scratch / "Main.java").write_text(source, encoding="utf-8")
    except OSError as exc:
        return OutcomeLabel(ABORTED, f"scratch dir write failed: {exc}")

    try:
        compiled = subprocess.run(
            [javac, "Main.java"],
            cwd=scratch,
            capture_output=True,
            text=True,
            timeout=budget_s,
        )
    except FileNotFoundError as exc:
        raise ToolchainError(f"cannot run {javac!r}: {exc}") from exc
    except subprocess.TimeoutExpired:
        return OutcomeLabel(TIMEOUT, f"compilation exceeded {budget_s}s")
    if compiled.returncode != 0:
        diagnostics = compiled.stderr[:_DETAIL_LIMIT]
        return OutcomeLabel(
            COMPILE_ERROR, diagnostics, classify_compile_error(diagnostics, candidate)
        )

    try:
        proc = subprocess.Popen(
            [java, "Main"],
            cwd=scratch,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            start_new_session=True,
        )
    except FileNotFoundError as exc:
        raise ToolchainError(f"cannot run {java!r}: {exc}") from exc
    try:
        stdout, stderr = proc.communicate(timeout=budget_s)
    except subprocess.TimeoutExpired:
        _kill_process_group(proc)
        return OutcomeLabel(TIMEOUT, f"test run exceeded {budget_s}s")
    if proc.returncode == 0:
        return OutcomeLabel(PASS, "")
    return OutcomeLabel(TEST_FAIL, (stderr + stdout)[:_DETAIL_LIMIT])


def classify_compile_error(diagnostics: str, candidate: str) -> str:
    """Coarse bucket for a compile failure (heuristic, not ground truth)."""
    if not parse_compilation_unit(candidate):
        return NON_CODE_OUTPUT
    if any(p.search(diagnostics) for p in _MISSING_LIBRARY_PATTERNS):
        return MISSING_EXTERNAL_LIBRARY
    symbol = _MISSING_SYMBOL.search(diagnostics)
    if symbol and re.search(
        rf"import\s+[\w.$]*\.{re.escape(symbol.group(1))}\s*;", candidate
    ):
        return MISSING_EXTERNAL_LIBRARY
    return OTHER_COMPILE_ERROR


def mock_evaluate(candidate: str) -> OutcomeLabel:
    """Deterministic stand-in for the JDK: outcome is derived from markers.

    No extractable class means CompileError/non_code_output (same rule as
    the real classifier); otherwise MOCK-TIMEOUT / MOCK-FAIL markers select
    the outcome and anything else passes.
    """
    if not parse_compilation_unit(candidate):
        return OutcomeLabel(COMPILE_ERROR, "mock: no class extracted", NON_CODE_OUTPUT)
    if MOCK_TIMEOUT_MARKER in candidate:
        return OutcomeLabel(TIMEOUT, "mock: timeout marker")
    if MOCK_FAIL_MARKER in candidate:
        return OutcomeLabel(TEST_FAIL, "mock: fail marker")
    return OutcomeLabel(PASS, "mock")


def _has_private_constructor(candidate: str, task: Task) -> bool:
    classes = parse_compilation_unit(candidate)
    primary = select_primary_class(classes, task.expected_class_name or None)
    return primary is not None and evaluate_predicates(primary).private_constructor


def _kill_process_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        pass
    try:
        proc.communicate(timeout=5)
    except subprocess.TimeoutExpired:
        proc.kill()
