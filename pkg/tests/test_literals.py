"""Tests of event and intervention literals."""

import pytest

from ptree.errors import DuplicateVariableError, LiteralSyntaxError
from ptree.intervention import InterventionSpec
from ptree.literals import parse_event, parse_interventions


def test_parse_event():
    assert parse_event("X=x,Y=~y") == {"X": "x", "Y": "~y"}
    assert parse_event(" X = x ") == {"X": "x"}
    assert parse_event("") == {}
    assert parse_event("   ") == {}


@pytest.mark.parametrize("text", ["X", "X=", "=x", "X=x,", "X=x,,Y=y"])
def test_parse_event_syntax(text):
    with pytest.raises(LiteralSyntaxError):
        parse_event(text)


def test_parse_event_repeated_variable():
    with pytest.raises(DuplicateVariableError):
        parse_event("X=x,X=~x")


def test_parse_interventions():
    assert parse_interventions(["X=x", "Y=~y,Z=z"]) == [
        InterventionSpec("X", "x"),
        InterventionSpec("Y", "~y"),
        InterventionSpec("Z", "z"),
    ]
    assert parse_interventions([]) == []


def test_parse_interventions_repeated_variable():
    with pytest.raises(DuplicateVariableError):
        parse_interventions(["X=x", "X=~x"])
