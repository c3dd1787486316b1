"""Parameter sets behind each concurrence figure.

Values a caption leaves open are listed in ``choices`` and echoed into the
CSV metadata line so they are never mistaken for published data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

HOMOGENEOUS = {"alpha": 0.0, "gamma": 0.0, "eta": 0.0}
ANISOTROPIC_IMPURITY = {"alpha": 0.0, "gamma": 0.8, "eta": -0.8}


@dataclass(frozen=True)
class FigurePreset:
    figure: str
    fixed: dict
    sweep: tuple  # (variable, start, stop, steps, scale)
    curve_var: str
    curve_values: tuple
    models: dict  # model label -> impurity strengths
    choices: tuple = field(default=())


def _models(impurity):
    return {"hom": HOMOGENEOUS, "imp": impurity}


FIGURES = {
    "2a": FigurePreset(
        "2a",
        {"J": 1.0, "J1": 1.0, "Delta": 1.0},
        ("T", 0.01, 2.0, 200, "linear"),
        "h",
        (0.5, 1.0, 2.0),
        _models(ANISOTROPIC_IMPURITY),
        ("h-list", "T-range"),
    ),
    "2b": FigurePreset(
        "2b",
        {"J": 1.0, "J1": 1.0, "Delta": 2.0},
        ("T", 0.01, 2.0, 200, "linear"),
        "h",
        (0.8, 1.6, 2.4),
        _models(ANISOTROPIC_IMPURITY),
        ("h-list", "T-range"),
    ),
    "3a": FigurePreset(
        "3a",
        {"J": 1.0, "J1": 1.0, "h": 1.2},
        ("Delta", 0.0, 3.0, 301, "linear"),
        "T",
        (0.1, 0.3, 0.5),
        _models(ANISOTROPIC_IMPURITY),
        ("T-list", "Delta-range"),
    ),
    "3b": FigurePreset(
        "3b",
        {"J": 1.0, "J1": 1.0, "h": 2.5},
        ("Delta", 0.0, 3.0, 301, "linear"),
        "T",
        (0.1, 0.3, 0.5),
        _models(ANISOTROPIC_IMPURITY),
        ("T-list", "Delta-range"),
    ),
    "4a": FigurePreset(
        "4a",
        {"J": 1.0, "J1": 1.0, "Delta": 0.9},
        ("h", 0.0, 3.0, 301, "linear"),
        "T",
        (0.1, 0.3, 0.5),
        _models(ANISOTROPIC_IMPURITY),
        ("h-range",),
    ),
    "4b": FigurePreset(
        "4b",
        {"J": 1.0, "J1": 1.0, "Delta": 1.0},
        ("h", 0.0, 3.0, 301, "linear"),
        "T",
        (0.1, 0.3, 0.5),
        _models(ANISOTROPIC_IMPURITY),
        ("h-range",),
    ),
    "5a": FigurePreset(
        "5a",
        {"J": 1.0, "J1": 1.0, "Delta": 2.0},
        ("T", 0.01, 2.5, 250, "linear"),
        "h",
        (1.6, 2.4),
        _models({"alpha": 0.0, "gamma": 0.0, "eta": -1.0}),
        ("T-range",),
    ),
    "5b": FigurePreset(
        "5b",
        {"J": 1.0, "J1": 1.0, "Delta": 2.0},
        ("T", 0.01, 2.5, 250, "linear"),
        "h",
        (1.6, 2.4),
        _models({"alpha": -1.0, "gamma": 0.0, "eta": 0.0}),
        ("T-range",),
    ),
}
