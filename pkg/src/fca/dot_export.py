from pathlib import Path
from typing import Iterable

from src.fca.concept_lattice import ConceptLattice, attribute_concept_index, object_concept_index
from src.fca.formal_context import to_mask
from src.utils.file_output import write_text_atomic

HIGHLIGHT_COLOR = "#f4a261"
COVERING_COLOR = "#2a9d8f"


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def reduced_labels(lattice: ConceptLattice) -> dict[int, tuple[list[str], list[str]]]:
    """
    Rotulagem reduzida: cada atributo aparece só no seu conceito-atributo μ(m)
    e cada objeto só no seu conceito-objeto γ(g).
    """
    ctx = lattice.context
    labels: dict[int, tuple[list[str], list[str]]] = {i: ([], []) for i in range(len(lattice))}
    for m, name in enumerate(ctx.attributes):
        labels[attribute_concept_index(ctx, lattice, m)][0].append(name)
    for g, name in enumerate(ctx.objects):
        labels[object_concept_index(ctx, lattice, g)][1].append(name)
    return labels


def render_dot(lattice: ConceptLattice, highlight: Iterable[str] = (), title: str = "lattice") -> str:
    """
    Diagrama de Hasse em DOT, de cima para baixo (arestas superior → inferior).
    Objetos em `highlight` têm o conceito-objeto colorido; o conceito que cobre todos
    eles recebe outra cor.
    """
    ctx = lattice.context
    highlighted = [ctx.object_index(name) for name in highlight]
    marked = {object_concept_index(ctx, lattice, g) for g in highlighted}
    covering = lattice.concept_of_objects(to_mask(highlighted, len(ctx.objects))) if highlighted else None

    lines = [f'digraph "{_escape(title)}" {{', "\tnode [shape=box, style=rounded];"]
    for i, (attributes, objects) in reduced_labels(lattice).items():
        # atributos em cima, objetos embaixo; parte vazia vira linha em branco
        label = "\\n".join(_escape(", ".join(names)) for names in (attributes, objects)) if attributes or objects else f"c{i}"
        attrs = [f'label="{label}"']
        if i == covering:
            attrs.append(f'style="rounded,filled", fillcolor="{COVERING_COLOR}"')
        elif i in marked:
            attrs.append(f'style="rounded,filled", fillcolor="{HIGHLIGHT_COLOR}"')
        lines.append(f"\tc{i} [{', '.join(attrs)}];")
    for lower, upper in lattice.covers:
        lines.append(f"\tc{upper} -> c{lower} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(lattice: ConceptLattice, path: str | Path, highlight: Iterable[str] = ()) -> Path:
    return write_text_atomic(path, render_dot(lattice, highlight, title=Path(path).stem))
