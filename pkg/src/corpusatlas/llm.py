"""Language-model providers for labeling and answer generation.

The stub provider is fully deterministic and is what tests and offline use run
on; the remote provider speaks a chat-completions-style JSON protocol at
temperature 0. Prompts are versioned template files under prompts/.
"""

from __future__ import annotations

from importlib import resources

from .errors import InvalidArgument, ProviderUnavailable

MAX_LABEL_LEN = 60
MAX_DESCRIPTION_LEN = 400


def load_prompt(name: str) -> str:
    return resources.files("corpusatlas.prompts").joinpath(f"{name}.txt").read_text("utf-8")


class StubLlm:
    """Deterministic extractive provider; never touches the network."""

    kind = "stub"

    def complete(self, prompt: str) -> str:
        raise ProviderUnavailable("stub provider has no free-form completion")


class RemoteLlm:
    """Chat-completions client: POST {model, messages, temperature: 0, max_tokens}."""

    kind = "remote"

    def __init__(self, endpoint: str, model: str, timeout: float = 30.0, max_tokens: int = 512):
        self.endpoint = endpoint
        self.model = model
        self.timeout = timeout
        self.max_tokens = max_tokens

    def complete(self, prompt: str) -> str:
        import httpx

        try:
            resp = httpx.post(
                self.endpoint,
                json={
                    "model": self.model,
                    "messages": [{"role": "user", "content": prompt}],
                    "temperature": 0,
                    "max_tokens": self.max_tokens,
                },
                timeout=self.timeout,
            )
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except Exception as exc:  # noqa: BLE001 - callers degrade to the stub
            raise ProviderUnavailable(f"LLM endpoint failed: {exc}") from exc


def _truncate(text: str, limit: int) -> str:
    if len(text) <= limit:
        return text
    return text[: limit - 3] + "..."


def stub_label(keywords: list[tuple[str, float]]) -> tuple[str, str]:
    label = " / ".join(term for term, _ in keywords[:3])
    description = "Documents about: " + ", ".join(term for term, _ in keywords[:10])
    return _truncate(label, MAX_LABEL_LEN), _truncate(description, MAX_DESCRIPTION_LEN)


def generate_label(llm, keywords: list[tuple[str, float]]) -> tuple[str, str]:
    """Label (<= 60 chars) and description (<= 400 chars) for a cluster's keywords.

    Remote failures fall back to the deterministic stub formats.
    """
    if not keywords:
        raise InvalidArgument("need at least one keyword")
    if getattr(llm, "kind", "stub") == "stub":
        return stub_label(keywords)
    prompt = load_prompt("label").format(
        keywords=", ".join(term for term, _ in keywords))
    try:
        text = llm.complete(prompt).strip()
    except ProviderUnavailable:
        return stub_label(keywords)
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    label = lines[0] if lines else ""
    description = " ".join(lines[1:]) if len(lines) > 1 else label
    if not label:
        return stub_label(keywords)
    return _truncate(label, MAX_LABEL_LEN), _truncate(description, MAX_DESCRIPTION_LEN)
