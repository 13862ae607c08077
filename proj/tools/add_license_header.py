#!/usr/bin/env python3
# Copyright 2026 The EmoTTS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Prepend the project license header to first-party sources.

Usage: add_license_header.py HEADER_FILE [ROOT]

The header file uses "//" comments; Python files receive the same text with
"#" comments, placed after any shebang line. Files that already carry the
header are left untouched, so the script is safe to re-run.
"""

import pathlib
import sys

SOURCE_DIRS = ("include", "src", "tests", "tools")
SUFFIXES = {".h", ".cc", ".py"}


def header_for(path, cpp_header):
    if path.suffix == ".py":
        return "".join("#" + line[2:] if line.startswith("//") else line
                       for line in cpp_header.splitlines(keepends=True))
    return cpp_header


def main(argv):
    if len(argv) not in (2, 3):
        print(__doc__.strip(), file=sys.stderr)
        return 2
    cpp_header = pathlib.Path(argv[1]).read_text()
    if not cpp_header.endswith("\n"):
        cpp_header += "\n"
    root = pathlib.Path(argv[2] if len(argv) == 3 else ".")
    changed = 0
    for top in SOURCE_DIRS:
        for path in sorted((root / top).rglob("*")):
            if path.suffix not in SUFFIXES or not path.is_file():
                continue
            header = header_for(path, cpp_header)
            text = path.read_text()
            if header.strip() in text:
                continue
            shebang = ""
            if text.startswith("#!"):
                shebang, _, text = text.partition("\n")
                shebang += "\n"
            path.write_text(shebang + header + "\n" + text)
            changed += 1
    print(f"added header to {changed} file(s)")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
