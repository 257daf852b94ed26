"""Natural-language character motion editing.

Subpackages:
  meo.lang      MEO program language: AST, parser, printer, catalog, validation
  meo.inducer   instruction -> program compiler over a chat-agent backend
  meo.keyframe  frame resolution, verb axes, IK, keyframe edits
  meo.infill    spline / diffusion in-betweening engines
  meo.metrics   G-MPJPE, fidelity tests, feature Frechet distance
  meo.service   HTTP session service with event-log persistence
"""

__version__ = "0.1.0"
