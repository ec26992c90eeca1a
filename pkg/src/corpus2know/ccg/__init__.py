from .categories import Atom, Category, CategoryError, Functor, Marked, parse_category
from .config import EXTENSIONS, GrammarConfig
from .grammar import assign_categories, default_categories, lexical_categories
from .chart import (Chart, ChartSizeError, Derivation, FailureDiagnosis, ParseError, ParseRate,
                    ParseResult, diagnose_failure, parse, parse_rate, recognizes, svo_profile,
                    validate_derivation)
