"""File formats, generators, verification oracles, rendering and the CLI."""
from .generate import generate, stream
from .io import Certificate, Instance, load_certificate, load_instance, write_json
from .oracles import MCEstimate, mc_volume
from .render import render_svg
from .verify import Verdict, verify

__all__ = ["generate", "stream", "Certificate", "Instance", "load_certificate", "load_instance", "write_json",
           "MCEstimate", "mc_volume", "render_svg", "Verdict", "verify"]
