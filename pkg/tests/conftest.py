"""Shared helpers for the test suite.

Provides a subprocess runner for the command-line tool (so exit codes and
stdout/stderr behave exactly as a user would see them) and a JSON-schema
validation helper bound to the schema files shipped inside the package.
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

import harmap

SCHEMA_DIR = Path(harmap.__file__).resolve().parent / "schemas"


def run_cli(*args, timeout=180):
    """Run ``python -m harmap <args>`` in a fresh subprocess."""
    return subprocess.run(
        [sys.executable, "-m", "harmap", *[str(a) for a in args]],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def load_schema(name):
    with open(SCHEMA_DIR / name, encoding="utf-8") as fh:
        return json.load(fh)


def validate_payload(payload, schema_name):
    """Validate ``payload`` against a shipped schema; raises on mismatch."""
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(payload, load_schema(schema_name))
    return payload


@pytest.fixture
def cli():
    return run_cli


@pytest.fixture
def schema_check():
    return validate_payload
