from .certificate import Certificate, canonical_text, instance_digest, read_certificate, write_certificate
from .dimacs import parse_dimacs_cnf, parse_dimacs_graph, write_dimacs_cnf, write_dimacs_graph
from .errors import CertificateError, DigestMismatch, ParseError
from .tsplib import parse_qaplib, parse_tsplib, write_qaplib, write_tsplib
