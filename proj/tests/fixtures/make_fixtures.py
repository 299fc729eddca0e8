#!/usr/bin/env python3
"""Regenerates the .pptx fixtures with python-pptx.

    python3 tests/fixtures/make_fixtures.py

Output is committed; the C++ tests only read the files.
"""
import io
import os
import random

from PIL import Image
from pptx import Presentation
from pptx.chart.data import CategoryChartData
from pptx.dml.color import RGBColor
from pptx.enum.chart import XL_CHART_TYPE
from pptx.enum.dml import MSO_THEME_COLOR
from pptx.enum.shapes import MSO_CONNECTOR, MSO_SHAPE
from pptx.enum.text import PP_ALIGN
from pptx.util import Emu, Pt

HERE = os.path.dirname(os.path.abspath(__file__))
W, H = 12192000, 6858000
BLANK = 6


def new_deck():
    prs = Presentation()
    prs.slide_width = Emu(W)
    prs.slide_height = Emu(H)
    return prs


def png_bytes():
    buf = io.BytesIO()
    Image.new("RGB", (8, 6), (40, 90, 160)).save(buf, format="PNG")
    return io.BytesIO(buf.getvalue())


def style_runs(frame, text, font, size, rgb, align=None):
    lines = text.split("\n")
    frame.text = lines[0]
    for extra in lines[1:]:
        frame.add_paragraph().text = extra
    for p in frame.paragraphs:
        if align is not None:
            p.alignment = align
        for r in p.runs:
            r.font.name = font
            r.font.size = Pt(size)
            r.font.color.rgb = RGBColor.from_string(rgb)


def textbox(slide, x, y, w, h, text, font, size, rgb, align=None):
    tb = slide.shapes.add_textbox(Emu(x), Emu(y), Emu(w), Emu(h))
    style_runs(tb.text_frame, text, font, size, rgb, align)
    return tb


def filled(slide, shape, x, y, w, h, rgb):
    s = slide.shapes.add_shape(shape, Emu(x), Emu(y), Emu(w), Emu(h))
    s.fill.solid()
    s.fill.fore_color.rgb = RGBColor.from_string(rgb)
    s.line.fill.background()
    return s


def save(prs, name):
    prs.core_properties.title = name
    prs.save(os.path.join(HERE, name + ".pptx"))


def textbox_deck():
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    textbox(slide, 914400, 914400, 5486400, 914400, "Hello world", "Georgia", 24, "1F3A5F")
    save(prs, "textbox")


def chart_deck():
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    textbox(slide, 609600, 342900, 10972800, 914400, "Revenue by quarter", "Lato", 28, "22313F")
    data = CategoryChartData()
    data.categories = ["Q1", "Q2", "Q3", "Q4"]
    data.add_series("Revenue", (4.1, 5.3, 6.0, 7.2))
    slide.shapes.add_chart(XL_CHART_TYPE.COLUMN_CLUSTERED, Emu(609600), Emu(1600200), Emu(10972800), Emu(4572000), data)
    save(prs, "chart")


def table_deck():
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    slide.shapes.add_table(3, 3, Emu(609600), Emu(1371600), Emu(6096000), Emu(1828800))
    filled(slide, MSO_SHAPE.OVAL, 8534400, 1371600, 1828800, 1828800, "E07A5F")
    save(prs, "table")


def gradient_deck():
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    s = slide.shapes.add_shape(MSO_SHAPE.RECTANGLE, Emu(914400), Emu(914400), Emu(4572000), Emu(2743200))
    s.fill.gradient()
    s.fill.gradient_angle = 90
    stops = s.fill.gradient_stops
    stops[0].color.rgb = RGBColor.from_string("1D3557")
    stops[0].position = 0.0
    stops[1].color.rgb = RGBColor.from_string("A8DADC")
    stops[1].position = 1.0
    save(prs, "gradient")


def group_deck():
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    group = slide.shapes.add_group_shape()
    filled(group, MSO_SHAPE.RECTANGLE, 1000000, 1000000, 2000000, 1000000, "2A9D8F")
    filled(group, MSO_SHAPE.OVAL, 3500000, 2500000, 1000000, 1000000, "E9C46A")
    filled(slide, MSO_SHAPE.ROUNDED_RECTANGLE, 6000000, 1000000, 2000000, 2000000, "F4A261")
    save(prs, "group")


def media_deck():
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    slide.shapes.add_picture(png_bytes(), Emu(914400), Emu(914400), Emu(3657600), Emu(2743200))
    textbox(slide, 5029200, 914400, 5486400, 914400, "Caption", "Lato", 20, "264653")
    save(prs, "media")


def theme_deck():
    # Title placeholder geometry comes from the layout; colors come from the theme.
    prs = new_deck()
    slide = prs.slides.add_slide(prs.slide_layouts[0])
    slide.shapes.title.text = "Inherited title"
    s = slide.shapes.add_shape(MSO_SHAPE.RECTANGLE, Emu(914400), Emu(4572000), Emu(1828800), Emu(914400))
    s.fill.solid()
    s.fill.fore_color.theme_color = MSO_THEME_COLOR.ACCENT_2
    for ph in list(slide.placeholders):
        if ph.placeholder_format.idx != 0:
            ph._element.getparent().remove(ph._element)
    save(prs, "theme")


PALETTES = [
    ("1D3557", "E63946", "F1FAEE", "A8DADC", "264653"),
    ("2B2D42", "EF233C", "EDF2F4", "8D99AE", "2B2D42"),
    ("264653", "2A9D8F", "E9C46A", "F4A261", "1B262C"),
    ("3D405B", "E07A5F", "F4F1DE", "81B29A", "3D405B"),
    ("22223B", "4A4E69", "F2E9E4", "C9ADA7", "22223B"),
    ("0B3954", "087E8B", "F5F1ED", "FF5A5F", "0B3954"),
    ("283618", "606C38", "FEFAE0", "DDA15E", "283618"),
    ("14213D", "FCA311", "E5E5E5", "F7B267", "14213D"),
    ("3C1642", "086375", "F4F4F9", "1DD3B0", "3C1642"),
    ("2F3E46", "52796F", "F0F3F4", "84A98C", "2F3E46"),
]

FONTS = [
    ("Montserrat", "Lato"),
    ("Georgia", "Source Sans Pro"),
    ("Playfair Display", "Open Sans"),
    ("Poppins", "Merriweather"),
    ("Raleway", "Roboto Slab"),
]

TITLES = ["Quarterly review", "Our roadmap", "Market landscape", "Design principles", "Customer voices",
          "Team update", "Next steps", "Key results", "Product vision", "Lessons learned"]
BODIES = ["Revenue grew steadily across regions\nRetention improved after onboarding changes",
          "Focus on fewer, better features\nShip weekly and measure outcomes",
          "Three segments drive most demand\nPartners expand our reach",
          "Clarity over decoration\nConsistency builds trust"]


def fx(f):
    return int(round(f * W))


def fy(f):
    return int(round(f * H))


def corpus_slide(prs, layout, palette, fonts, rng):
    dark, accent, light, soft, text = palette
    head, body = fonts
    slide = prs.slides.add_slide(prs.slide_layouts[BLANK])
    title = rng.choice(TITLES)
    para = rng.choice(BODIES)
    if layout == 0:
        filled(slide, MSO_SHAPE.RECTANGLE, fx(0.05), fy(0.08), fx(0.15), fy(0.02), accent)
        textbox(slide, fx(0.05), fy(0.14), fx(0.90), fy(0.16), title, head, 36, dark)
        textbox(slide, fx(0.05), fy(0.36), fx(0.90), fy(0.50), para, body, 20, text)
    elif layout == 1:
        textbox(slide, fx(0.05), fy(0.08), fx(0.90), fy(0.14), title, head, 34, dark)
        w = (0.90 - 0.08) / 3
        for i, label in enumerate(["Plan", "Build", "Grow"]):
            card = filled(slide, MSO_SHAPE.ROUNDED_RECTANGLE, fx(0.05 + i * (w + 0.04)), fy(0.30), fx(w), fy(0.55),
                          [soft, light, accent][i])
            style_runs(card.text_frame, label, body, 22, dark, PP_ALIGN.CENTER)
    elif layout == 2:
        slide.shapes.add_picture(png_bytes(), Emu(fx(0.05)), Emu(fy(0.15)), Emu(fx(0.42)), Emu(fy(0.70)))
        textbox(slide, fx(0.52), fy(0.15), fx(0.43), fy(0.15), title, head, 32, dark)
        line = slide.shapes.add_connector(MSO_CONNECTOR.STRAIGHT, Emu(fx(0.52)), Emu(fy(0.32)), Emu(fx(0.72)), Emu(fy(0.32)))
        line.line.color.rgb = RGBColor.from_string(accent)
        textbox(slide, fx(0.52), fy(0.36), fx(0.43), fy(0.49), para, body, 18, text)
    elif layout == 3:
        textbox(slide, fx(0.05), fy(0.08), fx(0.90), fy(0.14), title, head, 34, dark)
        size = fy(0.25)
        for left, value, caption, color in [(0.15, "42%", "Faster onboarding", accent), (0.60, "3x", "More referrals", soft)]:
            circle = filled(slide, MSO_SHAPE.FLOWCHART_CONNECTOR, fx(left), fy(0.30), size, size, color)
            style_runs(circle.text_frame, value, head, 28, dark, PP_ALIGN.CENTER)
            textbox(slide, fx(left), fy(0.62), fx(0.25), fy(0.20), caption, body, 18, text)
    else:
        filled(slide, MSO_SHAPE.ROUNDED_RECTANGLE, fx(0.08), fy(0.15), fx(0.84), fy(0.70), light)
        textbox(slide, fx(0.15), fy(0.25), fx(0.70), fy(0.35), "“Good design is as little design as possible.”",
                head, 30, dark, PP_ALIGN.LEFT)
        line = slide.shapes.add_connector(MSO_CONNECTOR.STRAIGHT, Emu(fx(0.15)), Emu(fy(0.62)), Emu(fx(0.25)), Emu(fy(0.62)))
        line.line.color.rgb = RGBColor.from_string(accent)
        textbox(slide, fx(0.15), fy(0.65), fx(0.70), fy(0.10), "Design team", body, 16, text)


def corpus_deck():
    rng = random.Random(20240611)
    prs = new_deck()
    for i in range(50):
        corpus_slide(prs, i % 5, PALETTES[(i // 5) % len(PALETTES)], FONTS[(i + i // 5) % len(FONTS)], rng)
    save(prs, "corpus")


if __name__ == "__main__":
    textbox_deck()
    chart_deck()
    table_deck()
    gradient_deck()
    group_deck()
    media_deck()
    theme_deck()
    corpus_deck()
