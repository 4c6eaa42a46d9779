from solvqi.services.catalog_service import CatalogService
from solvqi.services.qi_engine import QIEngine
from solvqi.services.report_service import ReportService
