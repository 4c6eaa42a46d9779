"""
Machine readable output of every command.

`results` is a tree of dicts, lists, strings, integers and booleans; rationals
are rendered as "p/q" strings before they reach the report so the JSON form
is exact and round-trips.
"""
import json
from typing import Any, Dict, List

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class Citation(BaseModel):
    rule: str
    text: str


class Report(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str
    inputs: List[str] = Field(default_factory=list)
    exit_code: int = 0
    results: Dict[str, Any] = Field(default_factory=dict)
    citations: List[Citation] = Field(default_factory=list)

    def cite(self, rule: str, text: str):
        if not any(c.rule == rule for c in self.citations):
            self.citations.append(Citation(rule=rule, text=text))

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate_json(text)
