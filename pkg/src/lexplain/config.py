"""Pipeline configuration as a flat ``key = value`` text file.

Example::

    # coarse POS mapping, first match wins
    pos_map = NN.*:N JJ.*:J VB.*:V RB.*:A
    min_pair_freq = 2
    relation_top_k = 3
    thesaurus_top_k = 5
    infrequency_threshold = 5
    score_mode = logdice
    template.N = builtin
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .corpus import COARSE_POS, DEFAULT_POS_MAP, compile_pos_map
from .explain import POS_TEMPLATES, load_templates
from .sketches import SCORE_MODES


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    pos_map: tuple[tuple[str, str], ...] = DEFAULT_POS_MAP
    min_pair_freq: int = 2
    relation_top_k: int = 3
    thesaurus_top_k: int = 5
    infrequency_threshold: float = 5.0
    score_mode: str = "logdice"
    templates: dict[str, str] = field(default_factory=lambda: {p: "builtin" for p in POS_TEMPLATES})

    def validate(self) -> "Config":
        for name in ("min_pair_freq", "relation_top_k", "thesaurus_top_k"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.infrequency_threshold > 0:
            raise ConfigError("infrequency_threshold must be > 0")
        if self.score_mode not in SCORE_MODES:
            raise ConfigError(f"score_mode must be one of {SCORE_MODES}")
        try:
            compile_pos_map(self.pos_map)
        except Exception as exc:
            raise ConfigError(f"bad pos_map: {exc}") from None
        for pos, path in self.templates.items():
            if pos not in POS_TEMPLATES:
                raise ConfigError(f"no explanation schema for POS {pos!r}")
            if path != "builtin" and not Path(path).is_file():
                raise ConfigError(f"template file for {pos} not found: {path}")
            try:
                load_templates(path, pos)
            except ValueError as exc:
                raise ConfigError(f"template for {pos}: {exc}") from None
        return self

    def template_for(self, pos: str):
        return load_templates(self.templates.get(pos, "builtin"), pos)

    def dump(self) -> str:
        lines = [
            "# lexplain configuration",
            "pos_map = " + " ".join(f"{r}:{c}" for r, c in self.pos_map),
            f"min_pair_freq = {self.min_pair_freq}",
            f"relation_top_k = {self.relation_top_k}",
            f"thesaurus_top_k = {self.thesaurus_top_k}",
            f"infrequency_threshold = {self.infrequency_threshold!r}",
            f"score_mode = {self.score_mode}",
        ]
        lines += [f"template.{pos} = {path}" for pos, path in sorted(self.templates.items())]
        return "\n".join(lines) + "\n"


def parse_pos_map(value: str) -> tuple[tuple[str, str], ...]:
    out = []
    for item in value.split():
        regex, sep, coarse = item.rpartition(":")
        if not sep or not regex or coarse not in COARSE_POS:
            raise ConfigError(f"bad pos_map entry {item!r}; expected REGEX:POS")
        out.append((regex, coarse))
    return tuple(out)


def parse_config(text: str, base: Config | None = None) -> Config:
    cfg = base or Config()
    values: dict = {}
    templates = dict(cfg.templates)
    ints = {f.name for f in fields(Config) if f.type in ("int", int)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = key.strip(), value.strip()
        try:
            if key == "pos_map":
                values[key] = parse_pos_map(value)
            elif key in ints:
                values[key] = int(value)
            elif key == "infrequency_threshold":
                values[key] = float(value)
            elif key == "score_mode":
                values[key] = value
            elif key.startswith("template."):
                templates[key.split(".", 1)[1]] = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    return replace(cfg, templates=templates, **values).validate()


def load_config(path) -> Config:
    return parse_config(Path(path).read_text(encoding="utf-8"))
