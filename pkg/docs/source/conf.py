# recipgamma documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

# -- General configuration ------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.coverage", "sphinx.ext.napoleon"]
templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "recipgamma"
copyright = "2024, recipgamma developers"
author = "recipgamma developers"

version = "0.3"
release = "0.3.0"

language = "en"
exclude_patterns = []
pygments_style = "sphinx"
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
htmlhelp_basename = "recipgammadoc"

# -- Options for LaTeX / manual output ------------------------------------

latex_documents = [
    (master_doc, "recipgamma.tex", "recipgamma Documentation", author, "manual"),
]
man_pages = [(master_doc, "recipgamma", "recipgamma Documentation", [author], 1)]
