from ._semio import Algebra, SemioError, Table, Workspace, gamma, integrate, parse, run

__all__ = ["Algebra", "SemioError", "Table", "Workspace", "gamma", "integrate", "parse", "run"]
