from solvqi.language.document import AlgebraDocument, document_from_algebra, print_document
from solvqi.language.parser import parse, parse_file
