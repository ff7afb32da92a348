"""Configuration for the rsdr command line"""

import os
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

COMMANDS = ("fit", "cv", "simulate", "outliers", "roc")


class Settings:
    """Environment defaults"""

    def __init__(self):
        self.threads = int(os.environ.get("RSDR_THREADS", "1"))
        self.log_level = os.environ.get("RSDR_LOG_LEVEL", "INFO").upper()


settings = Settings()


class RunConfig(BaseModel):
    """
    One CLI invocation.

    Field names are the long flags with dashes turned into underscores;
    unset numeric fields fall back to per-command defaults.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["fit", "cv", "simulate", "outliers", "roc"]

    # data
    input: str | None = None
    response: str | None = None
    standardize: bool = False

    # estimation
    dim: int | None = Field(None, ge=1)
    alpha: str | None = None
    eta: float | None = Field(None, gt=0)
    tol: float | None = Field(None, gt=0)
    max_iter: int | None = Field(None, ge=1)
    folds: int = Field(5, ge=2)

    # outliers
    gamma: float = Field(0.05, gt=0, lt=1)
    boot: int = Field(100, ge=1)
    reducer: Literal["none", "pca", "rsdr"] | None = None
    outliers: int = Field(10, ge=0)

    # simulation
    model: Literal["A", "B", "C"] = "A"
    dist: Literal["gaussian", "uniform"] = "gaussian"
    n: int | None = Field(None, ge=2)
    p: int | None = Field(None, ge=1)
    contaminate: bool = False
    reps: int | None = Field(None, ge=1)

    seed: int = 0
    threads: int = Field(default_factory=lambda: settings.threads, ge=1)
    output: str | None = None
    table: str | None = None
    log_level: str = Field(default_factory=lambda: settings.log_level)

    @model_validator(mode="after")
    def _check_required(self):
        if self.command in ("fit", "cv", "outliers") and not self.input:
            raise ValueError("%s requires --input" % self.command)
        if self.command in ("fit", "cv") and self.dim is None:
            raise ValueError("%s requires --dim" % self.command)
        if self.command == "simulate" and self.p is not None and self.p < 3:
            raise ValueError("simulate requires --p >= 3")
        return self

    def echo(self):
        """Settings that determine the result (threads and paths excluded)"""
        return self.model_dump(exclude={"threads", "output", "table", "log_level"})
