from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "v1"


class BorelTranscript(BaseModel):
  model_config = ConfigDict(extra="forbid", frozen=True)

  p: int
  k: int
  n: int
  block_sizes: List[int]
  solutions: List[List[int]]
  refuted: bool
  reason: str
  quotient_orders: List[int] = Field(default_factory=list)


class Certificate(BaseModel):
  """A replayable exclusion; chain certificates carry their terminal certificate."""
  model_config = ConfigDict(extra="forbid", frozen=True)

  group: str
  n: int
  filter: str
  parameters: Dict[str, int] = Field(default_factory=dict)
  lhs: Optional[int] = None
  relation: Optional[str] = None
  rhs: Optional[int] = None
  chain: List[str] = Field(default_factory=list)
  witness: Optional[str] = None
  transcript: Optional[BorelTranscript] = None
  terminal: Optional["Certificate"] = None
  note: str = ""


class CandidateEntry(BaseModel):
  model_config = ConfigDict(extra="forbid", frozen=True)

  group: str
  family: str
  aliases: List[str] = Field(default_factory=list)
  order: Optional[int] = None
  flags: List[str] = Field(default_factory=list)


class ExcludedEntry(BaseModel):
  model_config = ConfigDict(extra="forbid", frozen=True)

  group: str
  family: str
  aliases: List[str] = Field(default_factory=list)
  certificate: Certificate


class UndecidedEntry(BaseModel):
  model_config = ConfigDict(extra="forbid", frozen=True)

  group: str
  family: str
  aliases: List[str] = Field(default_factory=list)
  reason: str


class CandidateReport(BaseModel):
  model_config = ConfigDict(extra="forbid", frozen=True)

  n: int
  families: List[str]
  candidates: List[CandidateEntry] = Field(default_factory=list)
  excluded: List[ExcludedEntry] = Field(default_factory=list)
  undecided: List[UndecidedEntry] = Field(default_factory=list)
  config_digest: str = "none"

  def candidate_names(self) -> List[str]:
    return [entry.group for entry in self.candidates]

  def find(self, name: str):
    for bucket in (self.candidates, self.excluded, self.undecided):
      for entry in bucket:
        if entry.group == name or name in entry.aliases:
          return entry
    return None


class FactResult(BaseModel):
  name: str
  q: Optional[int] = None
  holds: bool
  summary: str
  details: Dict[str, Any] = Field(default_factory=dict)


class ReportEnvelope(BaseModel):
  schema_version: str = SCHEMA_VERSION
  command: str
  parameters: Dict[str, Any] = Field(default_factory=dict)
  report: Optional[CandidateReport] = None
  payload: Optional[Dict[str, Any]] = None
  timing: Optional[Dict[str, float]] = None


class ErrorResponse(BaseModel):
  error: str
  message: str
  details: Optional[Any] = None
