#!/usr/bin/env python3
"""Reference entailment scorer speaking the vulnwatch wire protocol.

POST /score        {"premise": str, "hypothesis": str} -> {"entailment": float}
POST /score_batch  {"premises": [str], "hypothesis": str} -> {"entailments": [float]}

With transformers installed the score is the entailment probability of an NLI
model (default facebook/bart-large-mnli) after softmax over the
contradiction/neutral/entailment logits. Without it, a keyword heuristic is
used so the protocol can still be exercised end to end.

If VULNWATCH_SCORER_TOKEN is set, requests must carry the matching
"Authorization: Bearer <token>" header.
"""

import argparse
import json
import os
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

KEYWORDS = ("vulnerability", "cve", "exploit", "patch", "malware", "security")


class KeywordModel:
    def score(self, premises, hypothesis):
        del hypothesis
        return [0.9 if any(k in p.lower() for k in KEYWORDS) else 0.1 for p in premises]


class NliModel:
    def __init__(self, name):
        import torch
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self.torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(name)
        self.model = AutoModelForSequenceClassification.from_pretrained(name)
        self.model.eval()
        labels = {v.lower(): k for k, v in self.model.config.id2label.items()}
        self.entail_index = labels.get("entailment", len(labels) - 1)

    def score(self, premises, hypothesis):
        out = []
        batch = 16
        with self.torch.no_grad():
            for i in range(0, len(premises), batch):
                chunk = premises[i : i + batch]
                enc = self.tokenizer(
                    chunk,
                    [hypothesis] * len(chunk),
                    return_tensors="pt",
                    truncation=True,
                    padding=True,
                )
                probs = self.model(**enc).logits.softmax(dim=-1)
                out.extend(probs[:, self.entail_index].tolist())
        return out


def make_handler(model, token):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            sys.stderr.write("%s\n" % (fmt % args))

        def _reply(self, status, payload):
            body = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_POST(self):
            if token and self.headers.get("Authorization") != "Bearer " + token:
                self._reply(401, {"error": "bad token"})
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                req = json.loads(self.rfile.read(length))
                if self.path == "/score":
                    value = model.score([req["premise"]], req["hypothesis"])[0]
                    self._reply(200, {"entailment": value})
                elif self.path == "/score_batch":
                    values = model.score(list(req["premises"]), req["hypothesis"])
                    self._reply(200, {"entailments": values})
                else:
                    self._reply(404, {"error": "unknown path"})
            except Exception as exc:  # malformed request or model failure
                self._reply(400, {"error": str(exc)})

    return Handler


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8756)
    parser.add_argument("--model", default="facebook/bart-large-mnli")
    parser.add_argument(
        "--keyword-only",
        action="store_true",
        help="skip transformers and serve the keyword heuristic",
    )
    args = parser.parse_args()

    if args.keyword_only:
        model = KeywordModel()
    else:
        try:
            model = NliModel(args.model)
        except ImportError:
            print("transformers not available; serving keyword heuristic", file=sys.stderr)
            model = KeywordModel()

    token = os.environ.get("VULNWATCH_SCORER_TOKEN", "")
    server = ThreadingHTTPServer((args.host, args.port), make_handler(model, token))
    print(f"scorer listening on http://{args.host}:{args.port}", file=sys.stderr)
    server.serve_forever()


if __name__ == "__main__":
    main()
