"""
Export des tables de resultats en CSV ou JSON.
"""

from pathlib import Path
from typing import Optional, Union
import json
import math

import pandas as pd

from ..config import ExperimentDefaults, get_config
from ..errors import ConfigError


class ExportError(ConfigError):
    """Table vide ou chemin de sortie non inscriptible."""
    pass


CORE_COLUMNS = ["model", "n", "param", "replicate", "distance", "bound", "baseline", "seed"]

FLOAT_FORMAT = "%.17g"


class ResultExporter:
    """Ecrit les tables de resultats (ordre de colonnes deterministe)."""

    def __init__(self, config: Optional[ExperimentDefaults] = None):
        self.config = config or get_config().experiment

    def _ordered(self, table: Union[pd.DataFrame, list[dict]]) -> pd.DataFrame:
        df = pd.DataFrame(table)
        if df.empty:
            raise ExportError("table vide: rien a exporter")
        # Colonnes du coeur d'abord, puis les extras dans leur ordre d'apparition
        columns = [c for c in CORE_COLUMNS if c in df.columns]
        columns += [c for c in df.columns if c not in CORE_COLUMNS]
        return df.reindex(columns=columns)

    def export(
        self,
        table: Union[pd.DataFrame, list[dict]],
        output_path: Path,
        output_format: Optional[str] = None,
    ) -> dict:
        """
        Ecrit la table.

        Args:
            table: DataFrame ou liste de lignes
            output_path: Chemin du fichier
            output_format: csv ou json (defaut: config)

        Returns:
            Stats d'export {rows, columns, path}
        """
        output_format = output_format or self.config.output_format
        df = self._ordered(table)
        output_path = Path(output_path)

        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            if output_format == "csv":
                df.to_csv(output_path, index=False, encoding="utf-8", float_format=FLOAT_FORMAT, lineterminator="\n")
            elif output_format == "json":
                with open(output_path, "w", encoding="utf-8", newline="\n") as f:
                    f.write(self._to_json(df))
            else:
                raise ExportError(f"format inconnu: {output_format!r} (csv|json)")
        except OSError as e:
            raise ExportError(f"ecriture impossible: {output_path}: {e}") from e

        return {"rows": len(df), "columns": list(df.columns), "path": str(output_path)}

    def _to_json(self, df: pd.DataFrame) -> str:
        """Tableau d'objets; flottants a 17 chiffres significatifs comme le CSV."""
        blocks = []
        for record in df.to_dict(orient="records"):
            fields = []
            for key, value in record.items():
                if hasattr(value, "item"):
                    value = value.item()
                fields.append(f"    {json.dumps(str(key), ensure_ascii=False)}: {_json_value(value)}")
            blocks.append("  {\n" + ",\n".join(fields) + "\n  }")
        if not blocks:
            return "[]\n"
        return "[\n" + ",\n".join(blocks) + "\n]\n"


def _json_value(value) -> str:
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        text = FLOAT_FORMAT % value
        # 2.0 reste un flottant a la relecture
        if not any(c in text for c in ".en"):
            text += ".0"
        return text
    return json.dumps(value, ensure_ascii=False, allow_nan=False)


def emit(table, output_path: Path, output_format: str = "csv") -> Path:
    """Ecrit la table au format donne et retourne le chemin."""
    ResultExporter().export(table, output_path, output_format)
    return Path(output_path)
