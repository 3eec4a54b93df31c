#!/usr/bin/env python3
"""Line-protocol transcription server used by the adapter tests.

Flags select failure behaviors so the harness's error handling can be
provoked deliberately. Not part of the package; test scaffolding only.
"""

import argparse
import json
import sys
import time


def emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def load_table(path):
    table = {}
    if not path:
        return table
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#") or "\t" not in line:
                continue
            sample_id, hypothesis = line.split("\t", 2)[:2]
            table[sample_id] = hypothesis
    return table


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--fixture")
    parser.add_argument("--name", default="pyfixture")
    parser.add_argument("--max-batch", type=int)
    parser.add_argument("--drop-id", help="omit this id from results")
    parser.add_argument("--garbage", action="store_true", help="emit one non-JSON line")
    parser.add_argument("--sleep", type=float, default=0.0)
    parser.add_argument("--die-after", type=int, help="exit abruptly after N batches")
    args = parser.parse_args()

    table = load_table(args.fixture)
    batches = 0
    sent_garbage = False

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            emit({"op": "error", "kind": "fatal", "msg": "malformed input line"})
            return 1
        op = msg.get("op")
        if op == "hello":
            emit({"op": "hello", "name": args.name, "version": 1})
        elif op == "transcribe":
            items = msg.get("items", [])
            if args.max_batch is not None and len(items) > args.max_batch:
                emit({"op": "error", "kind": "capacity", "msg": f"max batch is {args.max_batch}"})
                continue
            if args.garbage and not sent_garbage:
                sent_garbage = True
                sys.stdout.write("this is not json\n")
                sys.stdout.flush()
                continue
            if args.sleep:
                time.sleep(args.sleep)
            batches += 1
            if args.die_after is not None and batches > args.die_after:
                return 1
            results = []
            for item in items:
                if args.drop_id is not None and item["id"] == args.drop_id:
                    continue
                results.append(
                    {"id": item["id"], "text": table.get(item["id"], ""), "infer_ms": 1.0}
                )
            emit({"op": "result", "items": results})
        elif op == "bye":
            return 0
        else:
            emit({"op": "error", "kind": "fatal", "msg": f"unknown op {op!r}"})
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
