#!/usr/bin/env python3
# Copyright (C) 2026 The hev-seqopt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.
"""Runs a hev-seqopt command and validates its JSON output against a schema."""

import json
import subprocess
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) < 3:
        print("usage: validate_json.py SCHEMA COMMAND...", file=sys.stderr)
        return 2
    with open(sys.argv[1], encoding="utf-8") as f:
        schema = json.load(f)
    out = subprocess.run(sys.argv[2:], check=True, capture_output=True, text=True).stdout
    jsonschema.validate(json.loads(out), schema)
    print("valid:", sys.argv[1])
    return 0


if __name__ == "__main__":
    sys.exit(main())
