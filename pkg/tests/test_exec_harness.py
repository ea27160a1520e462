from __future__ import annotations

import json

import pytest

from singletonlab.dataset import load_tasks
from singletonlab.exec_harness import (
    COMPILE_ERROR,
    MISSING_EXTERNAL_LIBRARY,
    NON_CODE_OUTPUT,
    OTHER_COMPILE_ERROR,
    PASS,
    TEST_FAIL,
    TIMEOUT,
    ToolchainError,
    adapt_test_code,
    check_toolchain,
    classify_compile_error,
    evaluate_functionality,
    mock_evaluate,
)

from conftest import JDK_TASKS, find_jdk, requires_jdk

PLAIN_CANDIDATE = "class Solution { public int add(int a, int b) { return a + b; } }"
PROSE_CANDIDATE = "I cannot write this program, here is an explanation instead."


# --- classifier (no JDK needed) ----------------------------------------------


def test_prose_candidate_classified_non_code_output():
    diag = "Main.java:1: error: class, interface, or enum expected"
    assert classify_compile_error(diag, PROSE_CANDIDATE) == NON_CODE_OUTPUT


def test_missing_package_diagnostic():
    diag = "Main.java:1: error: package org.apache.commons does not exist"
    assert classify_compile_error(diag, PLAIN_CANDIDATE) == MISSING_EXTERNAL_LIBRARY


def test_cannot_access_diagnostic():
    diag = "Main.java:3: error: cannot access org.json.JSONObject"
    assert classify_compile_error(diag, PLAIN_CANDIDATE) == MISSING_EXTERNAL_LIBRARY


def test_missing_symbol_with_matching_import():
    candidate = "import org.apache.commons.lang3.StringUtils;\n" + PLAIN_CANDIDATE
    diag = (
        "Main.java:5: error: cannot find symbol\n"
        "        StringUtils.isEmpty(x);\n"
        "        ^\n"
        "  symbol:   class StringUtils\n"
    )
    assert classify_compile_error(diag, candidate) == MISSING_EXTERNAL_LIBRARY


def test_missing_symbol_without_import_is_other():
    diag = (
        "Main.java:5: error: cannot find symbol\n"
        "  symbol:   class StringUtils\n"
    )
    assert classify_compile_error(diag, PLAIN_CANDIDATE) == OTHER_COMPILE_ERROR


def test_syntax_error_is_other():
    diag = "Main.java:2: error: ';' expected"
    assert classify_compile_error(diag, PLAIN_CANDIDATE) == OTHER_COMPILE_ERROR


# --- test adaptation ----------------------------------------------------------


def test_adapt_rewrites_no_arg_instantiation():
    test_code = "Solution s = new Solution();\nSolution t = new Solution ( );"
    adapted = adapt_test_code(test_code, "Solution")
    assert adapted == "Solution s = Solution.getInstance();\nSolution t = Solution.getInstance();"


def test_adapt_leaves_arg_constructors_alone():
    test_code = "Solution s = new Solution(42);"
    assert adapt_test_code(test_code, "Solution") == test_code


def test_adapt_does_not_touch_other_classes():
    test_code = "Helper h = new Helper(); Solution s = new Solution();"
    adapted = adapt_test_code(test_code, "Solution")
    assert adapted == "Helper h = new Helper(); Solution s = Solution.getInstance();"


# --- mock backend ---------------------------------------------------------------


def test_mock_pass_by_default():
    assert mock_evaluate(PLAIN_CANDIDATE).kind == PASS


def test_mock_markers():
    assert mock_evaluate("// MOCK-FAIL\n" + PLAIN_CANDIDATE).kind == TEST_FAIL
    assert mock_evaluate("// MOCK-TIMEOUT\n" + PLAIN_CANDIDATE).kind == TIMEOUT


def test_mock_prose_is_compile_error_non_code():
    outcome = mock_evaluate(PROSE_CANDIDATE)
    assert outcome.kind == COMPILE_ERROR
    assert outcome.compile_error_category == NON_CODE_OUTPUT


# --- toolchain ---------------------------------------------------------------------


def test_missing_toolchain_fails_fast():
    with pytest.raises(ToolchainError):
        check_toolchain(javac="definitely-not-a-javac-binary")


# --- real JDK execution (skipped when no JDK on PATH) ---------------------------------


def jdk_tools() -> tuple[str, str]:
    tools = find_jdk()
    assert tools is not None
    return tools


def jdk_fixture_rows() -> list[dict]:
    return [json.loads(line) for line in JDK_TASKS.read_text("utf-8").splitlines()]


@requires_jdk
def test_toolchain_check_passes_with_real_jdk():
    javac, java = jdk_tools()
    check_toolchain(javac, java)


@requires_jdk
def test_canonical_solutions_pass(tmp_path):
    javac, java = jdk_tools()
    taskset = load_tasks(JDK_TASKS)
    rows = {row["task_id"]: row for row in jdk_fixture_rows()}
    assert len(taskset) >= 10
    for task in taskset:
        candidate = task.declaration + rows[task.task_id]["canonical_solution"]
        outcome = evaluate_functionality(
            candidate,
            task,
            30,
            scratch_dir=tmp_path / task.task_id.replace("/", "_"),
            javac=javac,
            java=java,
        )
        assert outcome.kind == PASS, (task.task_id, outcome.detail)


@requires_jdk
def test_mutated_solution_fails_tests(tmp_path):
    javac, java = jdk_tools()
    taskset = load_tasks(JDK_TASKS)
    task = taskset.tasks[0]  # add(a, b)
    broken = task.declaration + "        return a - b;\n    }\n}\n"
    outcome = evaluate_functionality(
        broken, task, 30, scratch_dir=tmp_path, javac=javac, java=java
    )
    assert outcome.kind == TEST_FAIL


@requires_jdk
def test_prose_candidate_compile_error(tmp_path):
    javac, java = jdk_tools()
    task = load_tasks(JDK_TASKS).tasks[0]
    outcome = evaluate_functionality(
        PROSE_CANDIDATE, task, 30, scratch_dir=tmp_path, javac=javac, java=java
    )
    assert outcome.kind == COMPILE_ERROR
    assert outcome.compile_error_category == NON_CODE_OUTPUT


@requires_jdk
def test_hallucinated_import_compile_error(tmp_path):
    javac, java = jdk_tools()
    task = load_tasks(JDK_TASKS).tasks[0]
    candidate = (
        "import org.fictional.helpers.MathKit;\n\n"
        "class Solution {\n"
        "    public int add(int a, int b) {\n"
        "        return MathKit.sum(a, b);\n"
        "    }\n"
        "}\n"
    )
    outcome = evaluate_functionality(
        candidate, task, 30, scratch_dir=tmp_path, javac=javac, java=java
    )
    assert outcome.kind == COMPILE_ERROR
    assert outcome.compile_error_category == MISSING_EXTERNAL_LIBRARY


@requires_jdk
def test_infinite_loop_times_out_within_budget(tmp_path):
    import time

    javac, java = jdk_tools()
    task = load_tasks(JDK_TASKS).tasks[0]
    candidate = (
        "class Solution {\n"
        "    public int add(int a, int b) {\n"
        "        while (true) { }\n"
        "    }\n"
        "}\n"
    )
    budget = 5
    start = time.monotonic()
    outcome = evaluate_functionality(
        candidate, task, budget, scratch_dir=tmp_path, javac=javac, java=java
    )
    elapsed = time.monotonic() - start
    assert outcome.kind == TIMEOUT
    assert elapsed < budget + 5


@requires_jdk
def test_singleton_candidate_with_test_adaptation(tmp_path):
    javac, java = jdk_tools()
    task = load_tasks(JDK_TASKS).tasks[0]
    singleton = (
        "class Solution {\n"
        "    private static Solution instance;\n"
        "    private Solution() {\n"
        "    }\n"
        "    public static Solution getInstance() {\n"
        "        if (instance == null) {\n"
        "            instance = new Solution();\n"
        "        }\n"
        "        return instance;\n"
        "    }\n"
        "    public int add(int a, int b) {\n"
        "        return a + b;\n"
        "    }\n"
        "}\n"
    )
    # without adaptation the test instantiates a private constructor
    plain = evaluate_functionality(
        singleton, task, 30, scratch_dir=tmp_path / "plain", javac=javac, java=java
    )
    assert plain.kind == COMPILE_ERROR
    # with adaptation the instantiation is rewritten to the accessor
    adapted = evaluate_functionality(
        singleton,
        task,
        30,
        scratch_dir=tmp_path / "adapted",
        javac=javac,
        java=java,
        adapt_tests=True,
    )
    assert adapted.kind == PASS


@requires_jdk
def test_isolated_scratch_directories(tmp_path):
    javac, java = jdk_tools()
    taskset = load_tasks(JDK_TASKS)
    rows = {row["task_id"]: row for row in jdk_fixture_rows()}
    first, second = taskset.tasks[0], taskset.tasks[1]
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    for task, scratch in ((first, dir_a), (second, dir_b)):
        candidate = task.declaration + rows[task.task_id]["canonical_solution"]
        evaluate_functionality(
            candidate, task, 30, scratch_dir=scratch, javac=javac, java=java
        )
    assert (dir_a / "Main.java").read_text("utf-8") != (dir_b / "Main.java").read_text("utf-8")
