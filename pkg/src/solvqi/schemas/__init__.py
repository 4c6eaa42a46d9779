from solvqi.schemas.report import Citation, Report
