from dataclasses import dataclass, field
from pathlib import Path

from src.utils.file_output import render_csv, write_text_atomic
from src.validation.cluster_validator import AssignmentResult, ClusterValidation, Verdict

CSV_HEADER = ("cluster", "verdict", "cohesion", "intent_size", "intruders")


def _distance(value: float | None) -> str:
    return "-" if value is None else f"{value:.3f}"


@dataclass(frozen=True)
class ValidationReport:
    validations: tuple[ClusterValidation, ...]
    assignments: tuple[AssignmentResult, ...] = ()
    splits: dict[int, list[tuple[str, ...]]] = field(default_factory=dict)
    cluster_names: dict[int, str] = field(default_factory=dict)

    def name_of(self, cluster_id: int | None) -> str:
        if cluster_id is None:
            return "-"
        return self.cluster_names.get(cluster_id, f"C{cluster_id + 1}")

    def counts(self) -> dict[Verdict, int]:
        counts = {verdict: 0 for verdict in Verdict}
        for validation in self.validations:
            counts[validation.verdict] += 1
        return counts

    def to_csv_text(self) -> str:
        rows = [
            (
                self.name_of(v.cluster_id),
                v.verdict.value,
                f"{v.cohesion:.4f}",
                v.intent_size,
                ";".join(i.name for i in v.intruders),
            )
            for v in self.validations
        ]
        return render_csv(CSV_HEADER, rows)

    def to_text(self) -> str:
        lines = ["# Validação dos grupos pelo lattice de conceitos", ""]
        for v in self.validations:
            lines.append(f"## {self.name_of(v.cluster_id)}: {v.verdict.value}")
            lines.append(f"membros ({len(v.members)}): {', '.join(v.members)}")
            lines.append(f"intensão compartilhada ({v.intent_size}): {', '.join(v.intent) or '∅'}")
            lines.append(f"extensão do conceito de cobertura ({len(v.extent)}): {', '.join(v.extent)}")
            lines.append(f"coesão: {v.cohesion:.4f}")
            lines.append(f"centro: {v.center} (intensão: {', '.join(v.center_intent) or '∅'})")
            if v.intruders:
                lines.append("intrusos:")
                for i in v.intruders:
                    status = "explicado" if i.explained else "NÃO explicado"
                    lines.append(
                        f"  - {i.name} (grupo {self.name_of(i.own_cluster)}): "
                        f"d_grupo={_distance(i.d_cluster)} (mín {i.min_cluster}), "
                        f"d_próprio={_distance(i.d_own)} (mín {'-' if i.min_own is None else i.min_own}) -> {status}"
                    )
            else:
                lines.append("intrusos: nenhum")
            if v.cluster_id in self.splits:
                blocks = " | ".join("{" + ", ".join(block) + "}" for block in self.splits[v.cluster_id])
                lines.append(f"sugestão de divisão: {blocks}")
            lines.append("")

        if self.assignments:
            lines.append("# Medidas flutuantes")
            lines.append("")
            for a in self.assignments:
                target = "sem decisão" if a.unresolved else self.name_of(a.assigned)
                ranking = ", ".join(f"{self.name_of(label)}={distance:.3f}" for label, distance in a.ranking()[:3])
                lines.append(f"- {a.measure} -> {target} ({ranking})")
            lines.append("")

        counts = self.counts()
        lines.append(
            "resumo: " + ", ".join(f"{verdict.value}={counts[verdict]}" for verdict in Verdict)
        )
        return "\n".join(lines) + "\n"

    def write(self, text_path: str | Path, csv_path: str | Path) -> tuple[Path, Path]:
        return write_text_atomic(text_path, self.to_text()), write_text_atomic(csv_path, self.to_csv_text())
