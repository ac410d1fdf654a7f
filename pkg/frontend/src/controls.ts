/**
 * Embedded web view chrome: the inspected iframe with a URL input, a
 * default-URL button, and a button toggling the 3D structure view beside
 * the page. Sites that refuse framing (X-Frame-Options and friends) get a
 * user-visible message rather than a workaround; cross-origin pages load
 * but cannot be measured, which the banner explains.
 */
import { canMeasureFrame } from "./measure.js";

export interface EmbeddedViewConfig {
  defaultUrl: string;
  frame: HTMLIFrameElement;
  urlInput: HTMLInputElement;
  defaultButton: HTMLButtonElement;
  toggleButton: HTMLButtonElement;
  banner: HTMLElement;
  visualizationPanel: HTMLElement;
}

export class EmbeddedView {
  visualizationOpen = false;
  onNavigate: (url: string) => void = () => {};

  constructor(private cfg: EmbeddedViewConfig) {
    cfg.urlInput.value = cfg.defaultUrl;
    cfg.urlInput.addEventListener("keydown", (e) => {
      if (e.key === "Enter") this.navigate(cfg.urlInput.value);
    });
    cfg.defaultButton.addEventListener("click", () =>
      this.navigate(cfg.defaultUrl),
    );
    cfg.toggleButton.addEventListener("click", () => this.toggle());
    cfg.frame.addEventListener("load", () => this.afterLoad());
    this.navigate(cfg.defaultUrl);
  }

  navigate(url: string): void {
    this.cfg.urlInput.value = url;
    this.hideBanner();
    this.cfg.frame.src = url;
    this.onNavigate(url);
  }

  toggle(): void {
    this.visualizationOpen = !this.visualizationOpen;
    this.cfg.visualizationPanel.style.display = this.visualizationOpen
      ? "block"
      : "none";
  }

  measurable(): boolean {
    return canMeasureFrame(this.cfg.frame);
  }

  private afterLoad(): void {
    if (!this.measurable()) {
      this.showBanner(
        "This page is cross-origin: the browser only permits analyzing " +
          "same-origin frames, so the structure view cannot be updated " +
          "from it. Pages that refuse framing entirely will stay blank.",
      );
    }
  }

  showBanner(message: string): void {
    this.cfg.banner.textContent = message;
    this.cfg.banner.style.display = "block";
  }

  hideBanner(): void {
    this.cfg.banner.style.display = "none";
  }
}
