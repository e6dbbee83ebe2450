from pn2sc.fileio import read_petri_net, read_statechart, write_statechart
from pn2sc.reduce import ReductionStatus, create_statechart
from pn2sc.validate import validate_counts, validate_full, validate_structure

__all__ = [
    'read_petri_net', 'read_statechart', 'write_statechart', 'ReductionStatus', 'create_statechart', 'validate_counts',
    'validate_full', 'validate_structure'
]
