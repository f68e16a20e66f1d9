"""Input/output file module"""
from .readers import graph_from_spec, parse_pvalues, read_cover, read_edge_list, read_pvalues
from .writers import rejection_records, summary_line, write_bounds, write_rejections
