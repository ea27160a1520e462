"""The five generation protocols: baseline plus four guiding strategies.

Each protocol is an iterative loop per (model, strategy, task): compose
prompt, get a candidate, extract code, check the Singleton predicates,
feed back on nonconformance, stop at the first conforming candidate or at
the iteration cap. Prompt text is fixed template + substitution, nothing
else; transcripts must re-render byte-exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources

from .dataset import Task
from .exec_harness import OutcomeLabel, ABORTED
from .gateway import ChatMessage, GatewayError, ModelHandle, ScriptedModel, complete
from .pattern_checker import (
    PredicateReport,
    evaluate_predicates,
    no_class_report,
    singleton_score,
)
from .source_model import parse_compilation_unit, select_primary_class

ROLE_PROMPT = (
    "You are a Java programmer. You respond with the code in Java to solve "
    "the task. No comments or explanations"
)
INSTRUCT_TASK_TEMPLATE = (
    "The primary class in the following task should follow the singleton "
    "design pattern.{task}"
)
INSTRUCT_FEEDBACK_TEMPLATE = (
    "Make sure that the primary class in the following code follows the "
    "singleton design pattern. {candidate}"
)
BINARY_FEEDBACK_TEMPLATE = (
    "The following code does not include a correctly formatted Singleton "
    "class: {candidate}. Please correct the code and return the complete code."
)
PREDICATE_FEEDBACK_TEMPLATE = (
    "The following code does not include a correctly formatted Singleton "
    "class: {candidate}. It failed the following checks {errors}. "
    "Please correct the code and return the complete code"
)
EXEMPLAR_HEADER = "Examples of correctly implemented Singleton classes:"

BASELINE = "baseline"
INSTRUCT = "instruct"
BINARY_FEEDBACK = "binary_feedback"
PREDICATE_FEEDBACK = "predicate_feedback"
FEWSHOT_FEEDBACK = "fewshot_feedback"
STRATEGY_KINDS = (BASELINE, INSTRUCT, BINARY_FEEDBACK, PREDICATE_FEEDBACK, FEWSHOT_FEEDBACK)

_EXEMPLAR_FILES = ("AppConfig.java", "ConnectionPool.java")


@dataclass(frozen=True)
class Strategy:
    kind: str
    max_iterations: int = 10
    exemplars: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.kind == BASELINE:
            object.__setattr__(self, "max_iterations", 1)
        if self.kind == FEWSHOT_FEEDBACK and len(self.exemplars) != 2:
            raise ValueError("fewshot_feedback requires exactly 2 exemplars")


@dataclass
class IterationRecord:
    index: int  # 1-based
    prompt_sent: str
    raw_response: str
    extracted_code: str
    predicate_report: PredicateReport
    conforming: bool


@dataclass
class RunRecord:
    model_id: str
    strategy_kind: str
    task_id: str
    iterations: list[IterationRecord] = field(default_factory=list)
    selected_candidate: str = ""
    selected_iteration: int = 0
    singleton_score: float = 0.0
    functional_outcome: OutcomeLabel | None = None
    wall_time_ms: int = 0
    config_digest: str = ""


def load_default_exemplars() -> tuple[str, str]:
    """The two shipped Singleton examples (eager and lazy), checker-verified."""
    texts = []
    for name in _EXEMPLAR_FILES:
        text = (
            resources.files("singletonlab").joinpath("exemplars", name).read_text("utf-8")
        )
        texts.append(text.rstrip("\n"))
    return verify_exemplars(tuple(texts))


def verify_exemplars(exemplars: tuple[str, ...]) -> tuple[str, str]:
    for source in exemplars:
        report = assess_candidate(source, None)
        if not report.is_singleton():
            raise ValueError(
                f"exemplar is not a conforming Singleton: {report.failed_checks}"
            )
    if len(exemplars) != 2:
        raise ValueError("exactly 2 exemplars are required")
    return (exemplars[0], exemplars[1])


def assess_candidate(code: str, expected_class_name: str | None) -> PredicateReport:
    """Parse a candidate, pick its primary class, run the predicate checks."""
    classes = parse_compilation_unit(code)
    primary = select_primary_class(classes, expected_class_name or None)
    return evaluate_predicates(primary) if primary is not None else no_class_report()


def _exemplar_block(exemplars: tuple[str, ...]) -> str:
    return EXEMPLAR_HEADER + "\n" + "\n\n".join(exemplars)


def initial_prompt(strategy: Strategy, task: Task) -> list[ChatMessage]:
    system = ChatMessage("system", ROLE_PROMPT)
    if strategy.kind == BASELINE:
        return [system, ChatMessage("user", task.description)]
    text = INSTRUCT_TASK_TEMPLATE.format(task=task.description)
    if strategy.kind == FEWSHOT_FEEDBACK:
        text = text + "\n\n" + _exemplar_block(strategy.exemplars)
    return [system, ChatMessage("user", text)]


def extract_code(raw_response: str) -> str:
    """Interior of the longest fenced code block, else the response unchanged."""
    blocks: list[str] = []
    i = 0
    while True:
        start = raw_response.find("```", i)
        if start < 0:
            break
        newline = raw_response.find("\n", start + 3)
        end = raw_response.find("```", start + 3)
        if end < 0:
            break
        if 0 <= newline < end:
            interior = raw_response[newline + 1 : end]
        else:
            interior = raw_response[start + 3 : end]  # single-line fence
        if interior.endswith("\n"):
            interior = interior[:-1]
        blocks.append(interior)
        i = end + 3
    if not blocks:
        return raw_response
    return max(blocks, key=len)


def feedback_prompt(
    strategy: Strategy, candidate: str, report: PredicateReport
) -> ChatMessage:
    if report.is_singleton():
        raise ValueError("feedback requested for a conforming candidate")
    if strategy.kind == BASELINE:
        raise ValueError("baseline sends no feedback")
    if strategy.kind == INSTRUCT:
        text = INSTRUCT_FEEDBACK_TEMPLATE.format(candidate=candidate)
    elif strategy.kind == BINARY_FEEDBACK:
        text = BINARY_FEEDBACK_TEMPLATE.format(candidate=candidate)
    else:
        errors = "; ".join(report.failed_checks)
        text = PREDICATE_FEEDBACK_TEMPLATE.format(candidate=candidate, errors=errors)
        if strategy.kind == FEWSHOT_FEEDBACK:
            text = text + "\n\n" + _exemplar_block(strategy.exemplars)
    return ChatMessage("user", text)


def run_task(
    model: ModelHandle | ScriptedModel,
    strategy: Strategy,
    task: Task,
    *,
    retries: int = 3,
    backoff_s: float = 1.0,
    config_digest: str = "",
) -> RunRecord:
    """Drive one (model, strategy, task) loop to completion.

    Gateway failures after retries abort the run: the record keeps the
    iterations seen so far and carries an Aborted outcome.
    """
    started = time.monotonic()
    model_id = model.model_id
    record = RunRecord(model_id, strategy.kind, task.task_id, config_digest=config_digest)
    history = initial_prompt(strategy, task)
    abort_detail: str | None = None

    for index in range(1, strategy.max_iterations + 1):
        try:
            reply = complete(model, history, retries=retries, backoff_s=backoff_s)
        except GatewayError as exc:
            abort_detail = str(exc)
            break
        code = extract_code(reply.content)
        report = assess_candidate(code, task.expected_class_name)
        conforming = report.is_singleton()
        record.iterations.append(
            IterationRecord(index, history[-1].content, reply.content, code, report, conforming)
        )
        history.append(reply)
        if conforming or index == strategy.max_iterations:
            break
        history.append(feedback_prompt(strategy, code, report))

    selected = next(
        (it for it in record.iterations if it.conforming),
        record.iterations[-1] if record.iterations else None,
    )
    if selected is not None:
        record.selected_candidate = selected.extracted_code
        record.selected_iteration = selected.index
        record.singleton_score = singleton_score(selected.predicate_report)
    if abort_detail is not None:
        record.functional_outcome = OutcomeLabel(ABORTED, abort_detail)
    record.wall_time_ms = int((time.monotonic() - started) * 1000)
    return record
