import json
from pathlib import Path
from typing import Dict, List

from services.socleEngine import Decomposition, IrrepLabel, Layer, SocleDiagram, ambientLoewyBound, loewyLength


ASCII_STYLE = {"corner": ("+", "+", "+", "+", "+", "+"), "horizontal": "-", "vertical": "|", "join": " + "}
UNICODE_STYLE = {"corner": ("┌", "┐", "├", "┤", "└", "┘"), "horizontal": "─", "vertical": "│", "join": " ⊕ "}


def labelText(label: IrrepLabel) -> str:
    return label.text


def layerText(layer: Layer, unicode: bool = False) -> str:
    style = UNICODE_STYLE if unicode else ASCII_STYLE
    parts = [labelText(label) if mult == 1 else f"{mult} {labelText(label)}" for label, mult in layer]
    return style["join"].join(parts)


def renderTower(diagram: SocleDiagram, unicode: bool = False) -> List[str]:
    """Boxed tower, top layer first and socle last."""
    style = UNICODE_STYLE if unicode else ASCII_STYLE
    topLeft, topRight, midLeft, midRight, bottomLeft, bottomRight = style["corner"]
    rows = [layerText(layer, unicode) for layer in reversed(diagram.layers)]
    width = max(len(row) for row in rows)
    rule = style["horizontal"] * (width + 2)

    lines = [topLeft + rule + topRight]
    for idx, row in enumerate(rows):
        if idx:
            lines.append(midLeft + rule + midRight)
        lines.append(f"{style['vertical']} {row.ljust(width)} {style['vertical']}")
    lines.append(bottomLeft + rule + bottomRight)
    return lines


def decompositionTitle(decomposition: Decomposition) -> str:
    if decomposition.algebra.isMixed:
        return f"{decomposition.algebra.value} V^({decomposition.p},{decomposition.q})"
    return f"{decomposition.algebra.value} V^{decomposition.p}"


def renderDecomposition(decomposition: Decomposition, unicode: bool = False) -> str:
    lines = [decompositionTitle(decomposition)]
    for diagram, mult in decomposition.diagrams():
        lines.append("")
        if mult > 1:
            lines.append(f"{mult} ×")
        lines.extend(renderTower(diagram, unicode))
    return "\n".join(lines) + "\n"


def renderSocle(diagram: SocleDiagram, unicode: bool = False) -> str:
    bound = ambientLoewyBound(diagram.algebra, diagram.covariant.weight, diagram.contravariant.weight)
    lines = renderTower(diagram, unicode)
    lines.append(f"Loewy length {loewyLength(diagram)} (ambient bound {bound})")
    return "\n".join(lines) + "\n"


def toJsonText(payload: Dict) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def writeJson(path: Path, payload: Dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(toJsonText(payload), encoding="utf-8")
