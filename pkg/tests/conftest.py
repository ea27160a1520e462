from __future__ import annotations

import json
import shutil
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "corpus"
MOCK_TASKS = FIXTURES / "tasks_mock.jsonl"
JDK_TASKS = FIXTURES / "tasks_jdk.jsonl"
MOCK_SCRIPT = FIXTURES / "mock_script.json"


def find_jdk() -> tuple[str, str] | None:
    javac = shutil.which("javac")
    java = shutil.which("java")
    if javac and java:
        return javac, java
    return None


requires_jdk = pytest.mark.skipif(
    find_jdk() is None, reason="no JDK (javac/java) on PATH"
)


@pytest.fixture(scope="session")
def corpus_labels() -> dict[str, dict[str, bool]]:
    return json.loads((FIXTURES / "corpus_labels.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def mock_script() -> dict:
    return json.loads(MOCK_SCRIPT.read_text("utf-8"))


class StubHandler(BaseHTTPRequestHandler):
    """Canned chat-completion endpoint; records request bodies."""

    requests: list[dict] = []
    failures_left = 0
    body = "class A {}"

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length))
        type(self).requests.append(
            {"payload": payload, "auth": self.headers.get("Authorization")}
        )
        if type(self).failures_left > 0:
            type(self).failures_left -= 1
            self.send_response(500)
            self.end_headers()
            self.wfile.write(b"boom")
            return
        response = {
            "choices": [{"message": {"role": "assistant", "content": type(self).body}}]
        }
        data = json.dumps(response).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_server():
    StubHandler.requests = []
    StubHandler.failures_left = 0
    StubHandler.body = "class A {}"
    server = HTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/v1/chat/completions"
    server.shutdown()
    thread.join(timeout=5)
