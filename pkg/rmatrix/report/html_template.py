"""HTML template for rmatrix reports."""

HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>rmatrix Report - {{ metadata.command }}</title>
    <style>
        body {
            font-family: -apple-system, BlinkMacSystemFont, "Segoe UI", Roboto, "Helvetica Neue", Arial, sans-serif;
            line-height: 1.6;
            color: #333;
            background: #f5f5f5;
            padding: 20px;
        }

        .container {
            max-width: 1100px;
            margin: 0 auto;
            background: white;
            padding: 40px;
            box-shadow: 0 2px 10px rgba(0,0,0,0.1);
            border-radius: 8px;
        }

        header {
            border-bottom: 3px solid #007bff;
            padding-bottom: 20px;
            margin-bottom: 30px;
        }

        h1 { color: #007bff; }

        .metadata p { margin: 5px 0; color: #666; }

        .metric-card {
            display: inline-block;
            padding: 15px 25px;
            border-radius: 6px;
            margin-right: 15px;
            color: white;
        }

        .success { background: #28a745; }
        .danger { background: #dc3545; }

        table { width: 100%; border-collapse: collapse; margin-top: 20px; }
        th, td { padding: 8px 12px; border-bottom: 1px solid #ddd; text-align: left; }
        th { background: #f0f4f8; }
        td.num { font-family: monospace; }
    </style>
</head>
<body>
    <div class="container">
        <header>
            <h1>rmatrix Report: {{ metadata.command }}</h1>
            <div class="metadata">
                {% for key in ['algebra', 'r_matrix', 'system', 'variant', 'seed'] %}
                {% if key in metadata %}<p><strong>{{ key }}:</strong> {{ metadata[key] }}</p>{% endif %}
                {% endfor %}
            </div>
        </header>

        <section>
            <div class="metric-card {{ 'success' if summary.get('passed') else 'danger' }}">
                {{ '✅ Passed' if summary.get('passed') else '🔴 Failed' }}
                ({{ summary.get('checks_failed', 0) }} of {{ summary.get('checks_total', checks|length) }} checks failed)
            </div>
            {% if explanation %}<p style="margin-top: 20px;">{{ explanation }}</p>{% endif %}
        </section>

        {% include 'checks_section.html' ignore missing %}
        {% include 'conventions_section.html' ignore missing %}

        <footer style="margin-top: 40px; color: #999;">Generated by rmatrix</footer>
    </div>
</body>
</html>
"""

CHECKS_SECTION = """<section>
    <h2>Checks</h2>
    <table>
        <tr><th>Check</th><th>Value</th><th>Tolerance</th><th>Status</th></tr>
        {% for check in checks %}
        <tr>
            <td>{{ check.name }}</td>
            <td class="num">{{ check.value | sci }}</td>
            <td class="num">{{ check.tolerance | sci }}</td>
            <td>{{ '✅' if check.passed else '🔴' }}{% if check.detail %} {{ check.detail }}{% endif %}</td>
        </tr>
        {% endfor %}
    </table>
</section>
"""

CONVENTIONS_SECTION = """{% if metadata.conventions %}<section>
    <h2>Conventions</h2>
    <ul>
        {% for key, value in metadata.conventions | dictsort %}
        <li><strong>{{ key }}:</strong> {{ value }}</li>
        {% endfor %}
    </ul>
</section>{% endif %}
"""
