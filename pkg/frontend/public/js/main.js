// Browser entry point. The API base comes from a <meta name="api-base">
// tag when the bundle is hosted apart from the service; otherwise the
// page origin is assumed to serve /v1 as well.
import { ExplorerApp } from "./app.js";
function apiBase() {
    const meta = document.querySelector('meta[name="api-base"]');
    if (meta?.content)
        return meta.content;
    return window.location.origin;
}
const root = document.getElementById("app");
if (root) {
    const app = new ExplorerApp(root, { apiBase: apiBase() });
    void app.start();
}
//# sourceMappingURL=main.js.map